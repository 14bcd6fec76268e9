/// C-style `%.12e` formatting: 12 fractional digits, signed two-digit exponent.
pub(crate) fn fmt_e12(x: f64) -> String {
    let s = format!("{x:.12e}");
    match s.find('e') {
        Some(pos) => {
            let (mantissa, exp) = s.split_at(pos);
            let exp: i32 = exp[1..].parse().expect("exponent");
            let sign = if exp < 0 { '-' } else { '+' };
            format!("{mantissa}e{sign}{:02}", exp.abs())
        }
        None => s,
    }
}
