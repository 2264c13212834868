//! Binary forms over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rat::{int, primitive_positive_scale, serde_rat_vec, Rat};
use crate::roots::UniPoly;
use crate::{Error, Result};

/// A homogeneous polynomial `sum_i coeffs[i] * x^i * y^(d-i)`.
///
/// The zero form is allowed and keeps its degree.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FormRepr", into = "FormRepr")]
pub struct BinaryForm {
    coeffs: Vec<Rat>,
}

#[derive(Serialize, Deserialize)]
struct FormRepr {
    degree: usize,
    #[serde(with = "serde_rat_vec")]
    coeffs: Vec<Rat>,
}

impl TryFrom<FormRepr> for BinaryForm {
    type Error = Error;

    fn try_from(r: FormRepr) -> Result<Self> {
        if r.coeffs.len() != r.degree + 1 {
            return Err(Error::Parse(format!(
                "degree {} needs {} coefficients, found {}",
                r.degree,
                r.degree + 1,
                r.coeffs.len()
            )));
        }
        Ok(BinaryForm { coeffs: r.coeffs })
    }
}

impl From<BinaryForm> for FormRepr {
    fn from(f: BinaryForm) -> Self {
        FormRepr {
            degree: f.degree(),
            coeffs: f.coeffs,
        }
    }
}

/// `n (n-1) ... (n-k+1)`, zero when `k > n`.
pub fn falling(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (n - k + 1..=n).fold(BigInt::one(), |acc, v| acc * v)
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    falling(n, k) / falling(k, k)
}

impl BinaryForm {
    /// Builds a form from its coefficients; `coeffs[i]` multiplies `x^i y^(d-i)`.
    pub fn new(coeffs: Vec<Rat>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form needs at least one coefficient");
        BinaryForm { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero(degree: usize) -> Self {
        BinaryForm {
            coeffs: vec![Rat::zero(); degree + 1],
        }
    }

    pub fn constant(c: Rat) -> Self {
        BinaryForm { coeffs: vec![c] }
    }

    /// `x^i y^(degree - i)`.
    pub fn monomial(i: usize, degree: usize) -> Self {
        assert!(i <= degree);
        let mut f = Self::zero(degree);
        f.coeffs[i] = Rat::one();
        f
    }

    pub fn x() -> Self {
        Self::monomial(1, 1)
    }

    pub fn y() -> Self {
        Self::monomial(0, 1)
    }

    /// `a x + b y`.
    pub fn linear(a: Rat, b: Rat) -> Self {
        BinaryForm { coeffs: vec![b, a] }
    }

    /// The linear form `b x - a y`, vanishing at the projective point `[a : b]`.
    pub fn vanishing_at(a: &Rat, b: &Rat) -> Self {
        BinaryForm {
            coeffs: vec![-a.clone(), b.clone()],
        }
    }

    /// `prod_i (x - r_i y)`.
    pub fn from_roots(roots: &[Rat]) -> Self {
        roots.iter().fold(Self::constant(Rat::one()), |acc, r| {
            &acc * &Self::vanishing_at(r, &Rat::one())
        })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Rat {
        &self.coeffs[i]
    }

    pub fn into_coeffs(self) -> Vec<Rat> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        BinaryForm {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::constant(Rat::one()), |acc, _| &acc * self)
    }

    /// Evaluates at the point `(a, b)`.
    pub fn eval(&self, a: &Rat, b: &Rat) -> Rat {
        let d = self.degree();
        // powers of a and b computed incrementally
        let mut apow = vec![Rat::one(); d + 1];
        let mut bpow = vec![Rat::one(); d + 1];
        for i in 1..=d {
            apow[i] = &apow[i - 1] * a;
            bpow[i] = &bpow[i - 1] * b;
        }
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| c * &apow[i] * &bpow[d - i])
            .fold(Rat::zero(), |acc, t| acc + t)
    }

    /// Multiplicity of the root `[1 : 0]`, i.e. the largest power of `y`
    /// dividing the form. Undefined (returns the degree + 1) for zero.
    pub fn y_multiplicity(&self) -> usize {
        self.coeffs.iter().rev().take_while(|c| c.is_zero()).count()
    }

    /// `f(t, 1)` as a univariate polynomial in `t`.
    pub fn dehomogenize(&self) -> UniPoly {
        UniPoly::new(self.coeffs.clone())
    }

    /// Rebuilds a degree-`degree` form from a univariate polynomial in `t = x/y`.
    pub fn homogenize(p: &UniPoly, degree: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); degree + 1];
        for (i, c) in p.coeffs().iter().enumerate() {
            assert!(i <= degree, "polynomial degree exceeds target form degree");
            coeffs[i] = c.clone();
        }
        BinaryForm { coeffs }
    }

    /// Positive rescaling to coprime integer coefficients whose highest
    /// nonzero coefficient (largest power of `x`) is positive.
    pub fn primitive(&self) -> Self {
        let mut coeffs = primitive_positive_scale(&self.coeffs);
        if let Some(top) = coeffs.iter().rev().find(|c| !c.is_zero()) {
            if top.is_negative() {
                coeffs.iter_mut().for_each(|c| *c = -c.clone());
            }
        }
        BinaryForm { coeffs }
    }

    /// Rescales so the first nonzero coefficient (lowest power of `x`) is 1.
    pub fn normalize_first(&self) -> Self {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            Some(c) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    /// True when both forms have the same degree and one is a nonzero
    /// multiple of the other.
    pub fn is_proportional(&self, other: &Self) -> bool {
        if self.degree() != other.degree() || self.is_zero() || other.is_zero() {
            return false;
        }
        self.normalize_first() == other.normalize_first()
    }

    /// Exact division; `None` if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() || divisor.degree() > self.degree() {
            return None;
        }
        let e = self.degree() - divisor.degree();
        if self.is_zero() {
            return Some(Self::zero(e));
        }
        if divisor.y_multiplicity() > self.y_multiplicity() {
            return None;
        }
        let (q, r) = self.dehomogenize().div_rem(&divisor.dehomogenize());
        if !r.is_zero() {
            return None;
        }
        Some(Self::homogenize(&q, e))
    }

    /// Monomial-by-monomial text such as `x^2*y - 3/2*x*y^2`.
    pub fn to_expr(&self) -> String {
        let d = self.degree();
        let mut out = String::new();
        for i in (0..=d).rev() {
            let c = &self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            let mono = match (i, d - i) {
                (0, 0) => String::new(),
                (i, 0) => power("x", i),
                (0, j) => power("y", j),
                (i, j) => format!("{}*{}", power("x", i), power("y", j)),
            };
            let mag = c.abs();
            let neg = c.is_negative();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

fn power(v: &str, e: usize) -> String {
    if e == 1 {
        v.to_string()
    } else {
        format!("{v}^{e}")
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr())
    }
}

impl fmt::Debug for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryForm[{}]({})", self.degree(), self.to_expr())
    }
}

impl Add for &BinaryForm {
    type Output = BinaryForm;

    fn add(self, rhs: &BinaryForm) -> BinaryForm {
        assert_eq!(self.degree(), rhs.degree(), "adding forms of different degree");
        BinaryForm {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &BinaryForm {
    type Output = BinaryForm;

    fn sub(self, rhs: &BinaryForm) -> BinaryForm {
        assert_eq!(self.degree(), rhs.degree(), "subtracting forms of different degree");
        BinaryForm {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &BinaryForm {
    type Output = BinaryForm;

    fn neg(self) -> BinaryForm {
        BinaryForm {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &BinaryForm {
    type Output = BinaryForm;

    fn mul(self, rhs: &BinaryForm) -> BinaryForm {
        let mut coeffs = vec![Rat::zero(); self.degree() + rhs.degree() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        BinaryForm { coeffs }
    }
}

/// Applies the differential operator of `h` to `f`.
///
/// For `h = sum_j b_j x^j y^(e-j)` the operator is
/// `sum_j b_j d^e / (dx^j dy^(e-j))`, with no binomial weights, so
/// `x^j y^(e-j)` sends `x^i y^(d-i)` to
/// `(i)_j (d-i)_(e-j) x^(i-j) y^(d-i-e+j)`.
pub fn apply_apolar(h: &BinaryForm, f: &BinaryForm) -> Result<BinaryForm> {
    let (e, d) = (h.degree(), f.degree());
    if e > d {
        return Err(Error::DegreeOutOfRange(format!(
            "operator degree {e} exceeds form degree {d}"
        )));
    }
    let mut out = vec![Rat::zero(); d - e + 1];
    for (j, b) in h.coeffs.iter().enumerate() {
        if b.is_zero() {
            continue;
        }
        for (r, slot) in out.iter_mut().enumerate() {
            let i = r + j;
            let a = &f.coeffs[i];
            if a.is_zero() {
                continue;
            }
            let w = falling(i, j) * falling(d - i, e - j);
            *slot += a * b * Rat::from_integer(w);
        }
    }
    Ok(BinaryForm { coeffs: out })
}

/// Whether `h` lies in the apolar ideal of `f`. Forms of degree above
/// `deg f` annihilate everything.
pub fn annihilates(h: &BinaryForm, f: &BinaryForm) -> bool {
    match apply_apolar(h, f) {
        Ok(r) => r.is_zero(),
        Err(_) => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::ratio;
    use proptest::prelude::*;

    fn xy_lin(a: i64, b: i64) -> BinaryForm {
        BinaryForm::linear(int(a), int(b))
    }

    #[test]
    fn difference_of_squares() {
        let p = &xy_lin(1, 1) * &xy_lin(1, -1);
        assert_eq!(p, BinaryForm::from_ints(&[-1, 0, 1]));
    }

    #[test]
    fn zero_product_keeps_degree() {
        let f = BinaryForm::from_ints(&[1, 2, 3]);
        let z = &BinaryForm::zero(2) * &f;
        assert!(z.is_zero());
        assert_eq!(z.degree(), 4);
    }

    #[test]
    fn binomial_square() {
        let l = xy_lin(1, 2);
        assert_eq!(&l * &l, BinaryForm::from_ints(&[4, 4, 1]));
    }

    #[test]
    fn apolar_kills_power_of_conjugate() {
        let h = xy_lin(1, -1);
        let f = xy_lin(1, 1).pow(3);
        assert!(apply_apolar(&h, &f).unwrap().is_zero());
    }

    #[test]
    fn apolar_direct_derivatives() {
        // d/dx (x^2 y) = 2xy
        let r = apply_apolar(&BinaryForm::x(), &BinaryForm::monomial(2, 3)).unwrap();
        assert_eq!(r, BinaryForm::monomial(1, 2).scale(&int(2)));
        // d^2/dy^2 (x^2 y^2) = 2x^2
        let r = apply_apolar(&BinaryForm::monomial(0, 2), &BinaryForm::monomial(2, 4)).unwrap();
        assert_eq!(r, BinaryForm::monomial(2, 2).scale(&int(2)));
    }

    #[test]
    fn apolar_degree_error() {
        let r = apply_apolar(&BinaryForm::monomial(0, 3), &BinaryForm::monomial(0, 2));
        assert!(matches!(r, Err(Error::DegreeOutOfRange(_))));
        assert!(annihilates(&BinaryForm::monomial(0, 3), &BinaryForm::monomial(0, 2)));
    }

    #[test]
    fn exact_division_handles_y_factors() {
        let l = BinaryForm::y();
        let f = &(&l * &xy_lin(1, 3)) * &xy_lin(2, -1);
        let q = f.exact_div(&l).unwrap();
        assert_eq!(q, &xy_lin(1, 3) * &xy_lin(2, -1));
        assert!(xy_lin(1, 3).exact_div(&l).is_none());
        assert!(f.exact_div(&xy_lin(1, 1)).is_none());
    }

    #[test]
    fn eval_and_roots() {
        let f = BinaryForm::from_roots(&[int(1), ratio(-1, 2)]);
        assert!(f.eval(&int(1), &int(1)).is_zero());
        assert!(f.eval(&int(-1), &int(2)).is_zero());
        assert_eq!(f.eval(&int(0), &int(1)), ratio(-1, 2));
    }

    #[test]
    fn expression_text() {
        let f = BinaryForm::new(vec![int(0), ratio(-3, 2), int(1)]);
        assert_eq!(f.to_expr(), "x^2 - 3/2*x*y");
        assert_eq!(BinaryForm::zero(3).to_expr(), "0");
    }

    fn arb_form(max_deg: usize) -> impl Strategy<Value = BinaryForm> {
        (0..=max_deg).prop_flat_map(|d| {
            prop::collection::vec(-9i64..=9, d + 1).prop_map(|v| BinaryForm::from_ints(&v))
        })
    }

    proptest! {
        #[test]
        fn composition_law(g in arb_form(3), h in arb_form(3), extra in 0usize..4,
                           seed in prop::collection::vec(-9i64..=9, 12)) {
            let d = g.degree() + h.degree() + extra;
            let f = BinaryForm::from_ints(&seed[..d + 1]);
            let lhs = apply_apolar(&(&g * &h), &f).unwrap();
            let rhs = apply_apolar(&g, &apply_apolar(&h, &f).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn apolar_bilinear(h in arb_form(3), a in arb_form(6), c in -5i64..5) {
            prop_assume!(h.degree() <= a.degree());
            let b = BinaryForm::new(a.coeffs().iter().rev().cloned().collect());
            let lhs = apply_apolar(&h, &(&a.scale(&int(c)) + &b)).unwrap();
            let rhs = &apply_apolar(&h, &a).unwrap().scale(&int(c)) + &apply_apolar(&h, &b).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
