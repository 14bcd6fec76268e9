//! Tabulated commutator profile for bulk evaluation.
//!
//! The decay and norm experiments evaluate `F(1/x)` at up to `2^20` cells;
//! quadrature per cell would dominate the runtime. The table samples the
//! quadrature-backed [`CommutatorProfile`] on a uniform `log u` grid and
//! interpolates with a local cubic; beyond the table the profile's validated
//! asymptotic expansion applies. Interpolation error is far below every
//! tolerance the experiments assert (the grid is dense and `F` is smooth in
//! `log u`).

use czlab_core::singular::CommutatorProfile;

use crate::Result;

const LN_LO: f64 = -1.3;
const LN_HI: f64 = 10.0;

pub struct ProfileTable {
    values: Vec<f64>,
    step: f64,
    profile: CommutatorProfile<f64>,
}

impl ProfileTable {
    pub fn build(nodes: usize) -> Result<Self> {
        let profile = CommutatorProfile::<f64>::new(1e-9)?;
        let step = (LN_HI - LN_LO) / (nodes as f64 - 1.0);
        let mut values = Vec::with_capacity(nodes);
        for k in 0..nodes {
            let u = (LN_LO + step * k as f64).exp();
            values.push(profile.eval(u)?);
        }
        Ok(Self { values, step, profile })
    }

    pub fn eval(&self, u: f64) -> f64 {
        let v = u.ln();
        if v > LN_HI {
            // validated asymptotic regime
            return 0.5 * v * v + std::f64::consts::PI.powi(2) / 3.0;
        }
        if v < LN_LO {
            return self.profile.eval(u).expect("positive argument");
        }
        // local cubic (4-point Lagrange) on the uniform log-grid
        let pos = (v - LN_LO) / self.step;
        let k = (pos.floor() as usize).clamp(1, self.values.len() - 3);
        let d = pos - k as f64;
        let (f0, f1, f2, f3) = (
            self.values[k - 1],
            self.values[k],
            self.values[k + 1],
            self.values[k + 2],
        );
        let c0 = -d * (d - 1.0) * (d - 2.0) / 6.0;
        let c1 = (d + 1.0) * (d - 1.0) * (d - 2.0) / 2.0;
        let c2 = -(d + 1.0) * d * (d - 2.0) / 2.0;
        let c3 = (d + 1.0) * d * (d - 1.0) / 6.0;
        c0 * f0 + c1 * f1 + c2 * f2 + c3 * f3
    }
}
