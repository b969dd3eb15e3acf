//! Young functions, simple functions with disjoint convex supports, their
//! Young-function mass, and the necessity ratio `N_k sigma_k / Phi(sigma_k)`
//! whose unboundedness refutes the weak-type estimate for a block basis.

use crate::basis::BlockConfig;
use crate::error::{Error, Result};
use crate::geometry::{clip_convex, ConvexPolygon};
use std::sync::Arc;

/// Supports may overlap by at most this fraction of the smaller support area.
const SUPPORT_OVERLAP_TOL: f64 = 1e-9;

/// Evaluable Young function: convex, nondecreasing, zero at zero.
#[derive(Clone)]
pub struct YoungFunction {
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    descriptor: String,
}

impl std::fmt::Debug for YoungFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("YoungFunction")
            .field("descriptor", &self.descriptor)
            .finish()
    }
}

impl YoungFunction {
    /// `Phi(t) = t (1 + log_+(t)^alpha)` with the natural logarithm; equals
    /// `t` for `t <= 1`.
    pub fn llogl(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        Ok(Self {
            eval: Arc::new(move |t: f64| {
                if t <= 0.0 {
                    0.0
                } else {
                    t * (1.0 + t.ln().max(0.0).powf(alpha))
                }
            }),
            descriptor: format!("LlogL^{alpha}"),
        })
    }

    /// The degenerate case `Phi(t) = t` (plain integrability).
    pub fn linear() -> Self {
        Self {
            eval: Arc::new(|t: f64| t.max(0.0)),
            descriptor: "linear".into(),
        }
    }

    pub fn from_fn(
        descriptor: impl Into<String>,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            eval: Arc::new(eval),
            descriptor: descriptor.into(),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }
}

/// Nonnegative simple function `sum_i c_i chi_{S_i}` with pairwise disjoint
/// convex supports. Overlapping supports are rejected rather than merged so
/// that integrals stay exact sums.
#[derive(Clone, Debug)]
pub struct SimpleFunction {
    terms: Vec<(f64, ConvexPolygon)>,
}

impl SimpleFunction {
    pub fn new(terms: Vec<(f64, ConvexPolygon)>) -> Result<Self> {
        for (c, support) in &terms {
            if !(c.is_finite() && *c >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "coefficients must be finite and nonnegative, got {c}"
                )));
            }
            if support.is_empty() {
                return Err(Error::InvalidParameter(
                    "supports must be nonempty polygons".into(),
                ));
            }
        }
        for i in 0..terms.len() {
            for j in i + 1..terms.len() {
                let overlap = clip_convex(&terms[i].1, &terms[j].1).area();
                let tolerance = SUPPORT_OVERLAP_TOL * terms[i].1.area().min(terms[j].1.area());
                if overlap > tolerance {
                    return Err(Error::OverlappingSupports { overlap, tolerance });
                }
            }
        }
        Ok(Self { terms })
    }

    /// The zero function.
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    /// Indicator of a single support.
    pub fn indicator(support: ConvexPolygon) -> Result<Self> {
        Self::new(vec![(1.0, support)])
    }

    /// `c` times the indicator of a single support.
    pub fn scaled(c: f64, support: ConvexPolygon) -> Result<Self> {
        Self::new(vec![(c, support)])
    }

    pub fn terms(&self) -> &[(f64, ConvexPolygon)] {
        &self.terms
    }

    pub fn max_coefficient(&self) -> f64 {
        self.terms.iter().map(|(c, _)| *c).fold(0.0, f64::max)
    }

    /// Same supports with every coefficient multiplied by `factor`.
    pub fn scale(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.terms
                .iter()
                .map(|(c, s)| (c * factor, s.clone()))
                .collect(),
        )
    }
}

/// `int Phi(|f| / lambda) = sum_i Phi(c_i / lambda) |S_i|`.
pub fn phi_integral(phi: &YoungFunction, f: &SimpleFunction, lambda: f64) -> f64 {
    assert!(lambda > 0.0, "lambda must be positive");
    f.terms
        .iter()
        .map(|(c, support)| phi.eval(c / lambda) * support.area())
        .sum()
}

/// `N_k sigma_k / Phi(sigma_k)` for block `k`.
pub fn necessity_ratio(cfg: &BlockConfig, phi: &YoungFunction, k: usize) -> Result<f64> {
    let (_, _, n, sigma) = cfg.block(k)?;
    Ok(n as f64 * sigma / phi.eval(sigma))
}
