//! Power-sum decompositions `f = sum_i c_i (a_i x + b_i y)^d`.
//!
//! A hyperbolic `s` in `f⊥` with roots `[a_i : b_i]` (so `s` is a multiple of
//! `prod (b_i x - a_i y)`) yields the powers `(a_i x + b_i y)^d`, and the
//! weights `c_i` solve a full-rank linear system.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::Matrix;
use crate::poly::{annihilates, binomial, BinaryForm};
use crate::rat::{format_rat, pow2, serde_rat, to_f64, Rat};
use crate::roots::{is_hyperbolic, rational_projective_roots, refine, RootInterval};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerTerm {
    #[serde(with = "serde_rat")]
    pub coeff: Rat,
    /// The linear form `a x + b y`.
    #[serde(with = "serde_rat")]
    pub a: Rat,
    #[serde(with = "serde_rat")]
    pub b: Rat,
}

impl PowerTerm {
    pub fn linear(&self) -> BinaryForm {
        BinaryForm::linear(self.a.clone(), self.b.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub degree: usize,
    pub terms: Vec<PowerTerm>,
    pub exact: bool,
    /// Exact value of `max_i |f_i - (sum c_j l_j^d)_i|`; zero when `exact`.
    #[serde(with = "serde_rat")]
    pub residual: Rat,
    pub precision_bits: Option<u32>,
}

impl Decomposition {
    pub fn resum(&self) -> BinaryForm {
        self.terms
            .iter()
            .fold(BinaryForm::zero(self.degree), |acc, t| {
                &acc + &t.linear().pow(self.degree).scale(&t.coeff)
            })
    }

    /// One line per term with floating-point previews.
    pub fn summary(&self) -> String {
        self.terms
            .iter()
            .map(|t| {
                format!(
                    "{:+.6e} * ({:.6}x + {:.6}y)^{}",
                    to_f64(&t.coeff),
                    to_f64(&t.a),
                    to_f64(&t.b),
                    self.degree
                )
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

fn residual_norm(f: &BinaryForm, approx: &BinaryForm) -> Rat {
    f.coeffs()
        .iter()
        .zip(approx.coeffs())
        .map(|(a, b)| (a - b).abs())
        .max()
        .unwrap_or_else(Rat::zero)
}

fn check_witness(s: &BinaryForm, f: &BinaryForm) -> Result<()> {
    if f.is_zero() || s.is_zero() {
        return Err(Error::ZeroForm);
    }
    if s.degree() > f.degree() + 1 {
        return Err(Error::DegreeOutOfRange(format!(
            "witness degree {} exceeds {}",
            s.degree(),
            f.degree() + 1
        )));
    }
    if !annihilates(s, f) {
        return Err(Error::NotApolar(format!("{s} does not annihilate {f}")));
    }
    let cert = is_hyperbolic(s)?;
    if !cert.hyperbolic {
        return Err(Error::NotHyperbolic(format!("{s}")));
    }
    Ok(())
}

/// Solves for weights on the given linear forms so that their `d`-th powers
/// sum to `f`.
fn solve_weights(f: &BinaryForm, points: &[(Rat, Rat)]) -> Option<Vec<Rat>> {
    let d = f.degree();
    let columns: Vec<Vec<Rat>> = points
        .iter()
        .map(|(a, b)| BinaryForm::linear(a.clone(), b.clone()).pow(d).into_coeffs())
        .collect();
    Matrix::from_columns(&columns, d + 1).solve(f.coeffs())
}

pub fn decompose_rational(s: &BinaryForm, f: &BinaryForm) -> Result<Decomposition> {
    check_witness(s, f)?;
    let points = rational_projective_roots(s)?.ok_or(Error::IrrationalRoots)?;
    let weights = solve_weights(f, &points)
        .ok_or_else(|| Error::Internal(format!("power system for {f} from {s} is inconsistent")))?;
    let terms: Vec<PowerTerm> = points
        .into_iter()
        .zip(weights)
        .filter(|(_, c)| !c.is_zero())
        .map(|((a, b), coeff)| PowerTerm { coeff, a, b })
        .collect();
    let out = Decomposition {
        degree: f.degree(),
        terms,
        exact: true,
        residual: Rat::zero(),
        precision_bits: None,
    };
    if out.resum() != *f {
        return Err(Error::Internal("exact decomposition does not re-sum".into()));
    }
    Ok(out)
}

/// Approximate decomposition for witnesses with irrational roots.
///
/// Roots are refined by bisection and replaced by rational points; the
/// weights solve the first rows of the power system exactly, and the
/// reported residual is the exact sup-norm of `f` minus the re-summed
/// approximation. Refinement continues until the residual is below
/// `2^-precision`.
pub fn decompose_numeric(s: &BinaryForm, f: &BinaryForm, precision: u32) -> Result<Decomposition> {
    check_witness(s, f)?;
    let d = f.degree();
    let u = s.dehomogenize();
    let intervals = crate::roots::isolate_univariate(&u);
    let at_infinity = s.y_multiplicity() > 0;
    let target = pow2(-(precision as i64));
    let mut working = precision as i64 + 16;
    let limit = 16 * precision as i64 + 2048;
    while working <= limit {
        let width = pow2(-working);
        let roots: Vec<Rat> = intervals
            .iter()
            .map(|iv| refine(&u, iv, &width))
            .map(|iv: RootInterval| iv.midpoint())
            .collect();
        let n = roots.len();
        // rows 0..n of the power system: C(d,i) t_j^i
        let mut m = Matrix::zeros(n, n);
        for (j, t) in roots.iter().enumerate() {
            let mut tp = Rat::one();
            for i in 0..n {
                m.set(i, j, &tp * Rat::from_integer(binomial(d, i)));
                tp *= t;
            }
        }
        let weights = m
            .solve(&f.coeffs()[..n])
            .ok_or_else(|| Error::Internal("approximate power system is singular".into()))?;
        let mut terms: Vec<PowerTerm> = roots
            .into_iter()
            .zip(weights)
            .map(|(t, coeff)| PowerTerm { coeff, a: t, b: Rat::one() })
            .collect();
        if at_infinity {
            let partial = Decomposition {
                degree: d,
                terms: terms.clone(),
                exact: false,
                residual: Rat::zero(),
                precision_bits: None,
            }
            .resum();
            terms.push(PowerTerm {
                coeff: f.coeff(d) - partial.coeff(d),
                a: Rat::one(),
                b: Rat::zero(),
            });
        }
        let mut out = Decomposition {
            degree: d,
            terms,
            exact: false,
            residual: Rat::zero(),
            precision_bits: Some(precision),
        };
        out.residual = residual_norm(f, &out.resum());
        if out.residual < target {
            return Ok(out);
        }
        working += precision as i64 / 2 + 16;
    }
    Err(Error::BudgetExhausted(format!(
        "residual did not fall below 2^-{precision}"
    )))
}

/// Exact when the witness has only rational roots, numeric otherwise.
pub fn decompose(s: &BinaryForm, f: &BinaryForm, precision: u32) -> Result<Decomposition> {
    match decompose_rational(s, f) {
        Err(Error::IrrationalRoots) => decompose_numeric(s, f, precision),
        other => other,
    }
}

pub fn describe_residual(d: &Decomposition) -> String {
    if d.residual.is_zero() {
        "0".into()
    } else {
        format!("{} (~2^{})", format_rat(&d.residual), crate::rat::floor_log2(&d.residual))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, ratio};

    fn f(c: &[i64]) -> BinaryForm {
        BinaryForm::from_ints(c)
    }

    #[test]
    fn quarter_identity() {
        let d = decompose_rational(&f(&[-1, 0, 1]), &f(&[0, 1, 0])).unwrap();
        assert_eq!(d.terms.len(), 2);
        for t in &d.terms {
            assert_eq!(t.b, int(1));
            assert_eq!(t.coeff, if t.a == int(1) { ratio(1, 4) } else { ratio(-1, 4) });
        }
    }

    #[test]
    fn four_term_quartic() {
        let g = f(&[0, 0, 1, 0, 0]);
        let s = f(&[0, -1, 0, 1, 0]);
        let d = decompose_rational(&s, &g).unwrap();
        assert_eq!(d.terms.len(), 4);
        assert_eq!(d.resum(), g);
        assert!(d.residual.is_zero());
        // supports 0, 1, -1 and infinity
        let mut pts: Vec<(Rat, Rat)> = d.terms.iter().map(|t| (t.a.clone(), t.b.clone())).collect();
        pts.sort();
        assert_eq!(
            pts,
            vec![(int(-1), int(1)), (int(0), int(1)), (int(1), int(0)), (int(1), int(1))]
        );
    }

    #[test]
    fn single_power() {
        let g = BinaryForm::linear(int(1), int(1)).pow(3);
        let d = decompose_rational(&f(&[-1, 1]), &g).unwrap();
        assert_eq!(d.terms, vec![PowerTerm { coeff: int(1), a: int(1), b: int(1) }]);
    }

    #[test]
    fn witness_errors() {
        let g = f(&[0, 1, 0]);
        assert!(matches!(decompose_rational(&f(&[0, 1, 1]), &g), Err(Error::NotApolar(_))));
        // x^2 + y^2 kills x^3 - 3 x y^2... but is not hyperbolic
        let h = f(&[0, -3, 0, 1]);
        assert!(matches!(decompose_rational(&f(&[1, 0, 1]), &h), Err(Error::NotHyperbolic(_))));
        // x^2 - 2y^2 kills x y but has irrational roots
        assert_eq!(decompose_rational(&f(&[-2, 0, 1]), &g), Err(Error::IrrationalRoots));
    }

    /// A degree-5 form whose apolar ideal contains
    /// `x (x^2 - 2y^2)(x^2 - 3y^2)`, which has irrational roots.
    fn irrational_pair() -> (BinaryForm, BinaryForm) {
        let s = &(&f(&[-2, 0, 1]) * &f(&[-3, 0, 1])) * &BinaryForm::x();
        let g = crate::apolarity::form_from_apolar(&f(&[1, 1, 1]), &s).unwrap();
        assert_eq!(g.degree(), 5);
        (g, s)
    }

    #[test]
    fn numeric_residual_certified() {
        let (g, s) = irrational_pair();
        let d = decompose_numeric(&s, &g, 64).unwrap();
        assert!(d.residual < pow2(1 - 64));
        assert_eq!(d.residual, residual_norm(&g, &d.resum()));
        let d2 = decompose_numeric(&s, &g, 128).unwrap();
        assert!(d2.residual < pow2(-128));
        assert!(crate::rat::floor_log2(&d2.residual) <= crate::rat::floor_log2(&d.residual) - 64);
    }

    #[test]
    fn numeric_agrees_with_exact() {
        let g = f(&[0, 0, 1, 0, 0]);
        let s = f(&[0, -1, 0, 1, 0]);
        let exact = decompose_rational(&s, &g).unwrap();
        let approx = decompose_numeric(&s, &g, 80).unwrap();
        assert!(approx.residual < pow2(-80));
        for t in &exact.terms {
            let near = approx.terms.iter().any(|u| {
                (&u.a - &t.a).abs() < pow2(-60)
                    && (&u.b - &t.b).abs() < pow2(-60)
                    && (&u.coeff - &t.coeff).abs() < pow2(-40)
            });
            assert!(near, "no approximate term near {t:?}");
        }
    }
}
