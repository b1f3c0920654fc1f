//! Incompressible neo-Hookean / Mooney-Rivlin material models: strain energy,
//! principal stresses, Baker-Ericksen admissibility, and regime classification.

use std::fmt;

use crate::error::{Error, Result};

/// Tolerance on `l1*l2*l3 - 1` for a valid incompressible stretch triple.
pub const INCOMPRESSIBILITY_TOL: f64 = 1e-12;

/// Two stretches closer than this are treated as equal when applying the
/// Baker-Ericksen inequalities (equal pairs impose no strict condition).
pub const EQUAL_STRETCH_TOL: f64 = 1e-12;

/// 5^(-5/3), the magnitude of the coefficient ratio separating the two
/// negative-coefficient regimes.
#[inline]
pub fn shift_ratio() -> f64 {
    5f64.powf(-5.0 / 3.0)
}

/// Two-term incompressible model. `mu1` scales the stretch-squared term and
/// `mu2` the inverse-stretch-squared term; `mu = mu1 + mu2` is the
/// small-strain shear modulus. Admissibility requires `mu1 > 0` and `mu > 0`
/// (negative `mu2` is allowed within those bounds).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialModel {
    mu1: f64,
    mu2: f64,
}

impl MaterialModel {
    pub fn new(mu1: f64, mu2: f64) -> Result<Self> {
        if !mu1.is_finite() || !mu2.is_finite() {
            return Err(Error::InvalidModel {
                mu1,
                mu2,
                reason: "coefficients must be finite",
            });
        }
        if mu1 <= 0.0 {
            return Err(Error::InvalidModel {
                mu1,
                mu2,
                reason: "mu1 must be positive",
            });
        }
        if mu1 + mu2 <= 0.0 {
            return Err(Error::InvalidModel {
                mu1,
                mu2,
                reason: "shear modulus mu1 + mu2 must be positive",
            });
        }
        Ok(Self { mu1, mu2 })
    }

    /// One-term model with `mu2 = 0`.
    pub fn neo_hookean(mu: f64) -> Result<Self> {
        Self::new(mu, 0.0)
    }

    #[inline]
    pub fn mu1(&self) -> f64 {
        self.mu1
    }

    #[inline]
    pub fn mu2(&self) -> f64 {
        self.mu2
    }

    /// Small-strain shear modulus `mu1 + mu2`.
    #[inline]
    pub fn shear_modulus(&self) -> f64 {
        self.mu1 + self.mu2
    }

    #[inline]
    pub fn regime(&self) -> Regime {
        classify_regime(self.mu1, self.mu2)
    }
}

/// Principal stretches of a homogeneous triaxial deformation with
/// `l1*l2*l3 = 1` enforced at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StretchTriple {
    l1: f64,
    l2: f64,
    l3: f64,
}

impl StretchTriple {
    pub fn new(l1: f64, l2: f64, l3: f64) -> Result<Self> {
        let bad = |reason| Error::InvalidStretch { l1, l2, l3, reason };
        if !(l1.is_finite() && l2.is_finite() && l3.is_finite()) {
            return Err(bad("stretches must be finite"));
        }
        if l1 <= 0.0 || l2 <= 0.0 || l3 <= 0.0 {
            return Err(bad("stretches must be positive"));
        }
        if (l1 * l2 * l3 - 1.0).abs() > INCOMPRESSIBILITY_TOL {
            return Err(bad("volume is not preserved (l1*l2*l3 != 1)"));
        }
        Ok(Self { l1, l2, l3 })
    }

    /// The undeformed reference state.
    pub fn identity() -> Self {
        Self {
            l1: 1.0,
            l2: 1.0,
            l3: 1.0,
        }
    }

    /// Canonical two-equal triple `(lambda, 1/sqrt(lambda), 1/sqrt(lambda))`.
    pub fn two_equal(lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidStretch {
                l1: lambda,
                l2: lambda,
                l3: lambda,
                reason: "branch stretch must be positive and finite",
            });
        }
        let other = 1.0 / lambda.sqrt();
        Ok(Self {
            l1: lambda,
            l2: other,
            l3: other,
        })
    }

    #[inline]
    pub fn l1(&self) -> f64 {
        self.l1
    }

    #[inline]
    pub fn l2(&self) -> f64 {
        self.l2
    }

    #[inline]
    pub fn l3(&self) -> f64 {
        self.l3
    }

    #[inline]
    pub fn as_array(&self) -> [f64; 3] {
        [self.l1, self.l2, self.l3]
    }
}

/// Coefficient-ratio regime of an admissible model. Only the ratio
/// `mu2/mu1` matters; the boundaries are resolved as:
/// `mu2 = 0` is `NeoHookean`, `mu2 = mu1/3` is `E11`, and
/// `mu2 = -mu1/5^(5/3)` is `E22`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    NeoHookean,
    /// `mu2 >= mu1/3`: rod-like states become the neutrally stable family.
    E11,
    /// `0 < mu2 < mu1/3`: plate-like states first, with a secondary branch of
    /// three unequal stretches linking plate to rod.
    E12,
    /// `-mu1/5^(5/3) < mu2 < 0`: the branch map folds, giving a window of
    /// neutrally stable plate-like states.
    E21,
    /// `mu2 <= -mu1/5^(5/3)`: every non-trivial state is unstable.
    E22,
    Inadmissible,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Regime::NeoHookean => "NeoHookean",
            Regime::E11 => "E11",
            Regime::E12 => "E12",
            Regime::E21 => "E21",
            Regime::E22 => "E22",
            Regime::Inadmissible => "Inadmissible",
        };
        f.write_str(name)
    }
}

/// Classify a raw coefficient pair, returning `Inadmissible` when `mu1 <= 0`
/// or `mu1 + mu2 <= 0`.
pub fn classify_regime(mu1: f64, mu2: f64) -> Regime {
    if !mu1.is_finite() || !mu2.is_finite() || mu1 <= 0.0 || mu1 + mu2 <= 0.0 {
        return Regime::Inadmissible;
    }
    if mu2 == 0.0 {
        return Regime::NeoHookean;
    }
    if mu2 > 0.0 {
        if mu2 * 3.0 >= mu1 {
            Regime::E11
        } else {
            Regime::E12
        }
    } else if mu2 / mu1 > -shift_ratio() {
        Regime::E21
    } else {
        Regime::E22
    }
}

/// Strain energy `mu1/2 (l1^2+l2^2+l3^2-3) + mu2/2 (1/l1^2+1/l2^2+1/l3^2-3)`.
pub fn strain_energy(model: &MaterialModel, s: &StretchTriple) -> f64 {
    let [l1, l2, l3] = s.as_array();
    let first = l1 * l1 + l2 * l2 + l3 * l3 - 3.0;
    let second = 1.0 / (l1 * l1) + 1.0 / (l2 * l2) + 1.0 / (l3 * l3) - 3.0;
    0.5 * model.mu1 * first + 0.5 * model.mu2 * second
}

/// Principal Cauchy stresses `T_i = -p + mu1 l_i^2 - mu2 / l_i^2`.
pub fn principal_cauchy_stress(model: &MaterialModel, s: &StretchTriple, p: f64) -> [f64; 3] {
    s.as_array()
        .map(|l| -p + model.mu1 * l * l - model.mu2 / (l * l))
}

/// Principal first Piola-Kirchhoff stresses `P_i = T_i / l_i`.
pub fn principal_piola_stress(model: &MaterialModel, s: &StretchTriple, p: f64) -> [f64; 3] {
    let t = principal_cauchy_stress(model, s, p);
    let l = s.as_array();
    [t[0] / l[0], t[1] / l[1], t[2] / l[2]]
}

/// Baker-Ericksen admissibility: for every pair of distinct stretches the
/// remaining index `k` must satisfy `mu1 + mu2 * l_k^2 > 0`. Pairs equal
/// within [`EQUAL_STRETCH_TOL`] impose no strict condition.
pub fn baker_ericksen_holds(model: &MaterialModel, s: &StretchTriple) -> bool {
    let l = s.as_array();
    for k in 0..3 {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        if (l[i] - l[j]).abs() > EQUAL_STRETCH_TOL {
            if model.mu1 + model.mu2 * l[k] * l[k] <= 0.0 {
                return false;
            }
        }
    }
    true
}
