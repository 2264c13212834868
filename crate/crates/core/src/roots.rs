//! Real roots: Sturm sequences, isolation and the hyperbolicity predicate.
//!
//! A binary form `p` of degree `d` has projective roots `[t : 1]` for the real
//! roots `t` of `p(t, 1)` plus the root `[1 : 0]` with multiplicity equal to
//! the power of `y` dividing `p`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::poly::BinaryForm;
use crate::rat::{primitive_positive_scale, serde_rat, serde_rat_vec, Rat};
use crate::{Error, Result};

/// Univariate polynomial in ascending powers, with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UniPoly {
    #[serde(with = "serde_rat_vec")]
    coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> Self {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rat) -> Self {
        UniPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let Some(sd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if sd < dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rat::zero(); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let c = &rem[k + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * b;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Positive rescaling to coprime integer coefficients.
    pub fn primitive(&self) -> Self {
        UniPoly::new(primitive_positive_scale(&self.coeffs))
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = int_poly::from_rats(&self.coeffs);
        let mut b = int_poly::from_rats(&other.coeffs);
        while !b.is_empty() {
            let r = int_poly::pseudo_rem(&a, &b);
            a = b;
            b = r;
        }
        let g = UniPoly::new(int_poly::to_rats(&a));
        match g.lead() {
            Some(l) => g.scale(&l.recip()),
            None => g,
        }
    }

    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.primitive()
    }

    pub fn is_squarefree(&self) -> bool {
        self.degree().unwrap_or(0) == 0 || self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// A power of two strictly above the absolute value of every complex
    /// root, from the bound `2 max_i |a_(n-i) / a_n|^(1/i)`.
    pub fn root_bound(&self) -> Rat {
        let Some(n) = self.degree() else {
            return Rat::one();
        };
        let ip = int_poly::from_rats(&self.coeffs);
        let lead_bits = ip[n].bits() as i64;
        let mut k = 0i64;
        for i in 1..=n {
            let c = &ip[n - i];
            if c.is_zero() {
                continue;
            }
            // |c / lead| < 2^(bits(c) - lead_bits + 1)
            let e = c.bits() as i64 - lead_bits + 1;
            k = k.max(1 + e.div_euclid(i as i64) + i64::from(e.rem_euclid(i as i64) != 0));
        }
        crate::rat::pow2(k)
    }
}

/// Integer polynomial helpers used by the Sturm machinery; rational
/// arithmetic is avoided in the hot loops.
mod int_poly {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{Signed, Zero};

    use crate::rat::Rat;

    pub type IntPoly = Vec<BigInt>;

    pub fn trim(mut p: IntPoly) -> IntPoly {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        p
    }

    /// Divides out the (positive) content.
    pub fn primitive(p: IntPoly) -> IntPoly {
        let g = p.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g.is_zero() || g == BigInt::from(1) {
            return p;
        }
        p.into_iter().map(|c| c / &g).collect()
    }

    /// Positive integer multiple of a rational polynomial.
    pub fn from_rats(c: &[Rat]) -> IntPoly {
        let lcm = c.iter().fold(BigInt::from(1), |l, r| l.lcm(r.denom()));
        primitive(trim(c.iter().map(|r| r.numer() * (&lcm / r.denom())).collect()))
    }

    pub fn to_rats(p: &IntPoly) -> Vec<Rat> {
        p.iter().map(|c| Rat::from_integer(c.clone())).collect()
    }

    pub fn derivative(p: &IntPoly) -> IntPoly {
        primitive(trim(
            p.iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        ))
    }

    /// A positive multiple of `rem(a, b)`, made primitive.
    pub fn pseudo_rem(a: &IntPoly, b: &IntPoly) -> IntPoly {
        let db = b.len() - 1;
        if a.len() < b.len() {
            return a.clone();
        }
        let lead = &b[db];
        let steps = a.len() - b.len() + 1;
        let mut r = a.clone();
        for k in (0..steps).rev() {
            let top = r[k + db].clone();
            for c in r.iter_mut() {
                *c *= lead;
            }
            if !top.is_zero() {
                for (j, bj) in b.iter().enumerate() {
                    r[k + j] -= &top * bj;
                }
            }
            r.truncate(k + db);
            r = primitive(r);
        }
        let mut r = trim(r);
        if lead.is_negative() && steps % 2 == 1 {
            // primitive() kept the sign of each multiplication by `lead`
            for c in r.iter_mut() {
                *c = -&*c;
            }
        }
        r
    }

    /// Sign of `p(n/q)` for `q > 0`, via `sum a_i n^i q^(deg - i)`.
    pub fn sign_at(p: &IntPoly, t: &Rat) -> i32 {
        if p.is_empty() {
            return 0;
        }
        let (n, q) = (t.numer(), t.denom());
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::from(1);
        for c in p.iter().rev() {
            acc = acc * n + c * &qpow;
            qpow *= q;
        }
        match acc.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    pub fn sign_at_infinity(p: &IntPoly, positive: bool) -> i32 {
        match p.last() {
            None => 0,
            Some(l) => {
                let s = if l.is_negative() { -1 } else { 1 };
                if positive || (p.len() - 1).is_multiple_of(2) {
                    s
                } else {
                    -s
                }
            }
        }
    }
}

/// Sturm chain `p, p', -rem(p, p'), ...`, each member rescaled by a positive
/// constant to integer coefficients.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    chain: Vec<int_poly::IntPoly>,
}

impl SturmSequence {
    pub fn new(p: &UniPoly) -> Self {
        let first = int_poly::from_rats(&p.coeffs);
        if first.len() <= 1 {
            return SturmSequence { chain: vec![first] };
        }
        let mut chain = vec![first.clone(), int_poly::derivative(&first)];
        loop {
            let n = chain.len();
            let r = int_poly::pseudo_rem(&chain[n - 2], &chain[n - 1]);
            if r.is_empty() {
                break;
            }
            chain.push(r.into_iter().map(|c| -c).collect());
        }
        SturmSequence { chain }
    }

    /// The last chain member: `gcd(p, p')` up to a constant, made monic.
    pub fn gcd_with_derivative(&self) -> UniPoly {
        let g = UniPoly::new(int_poly::to_rats(self.chain.last().expect("nonempty chain")));
        match g.lead() {
            Some(l) => g.scale(&l.recip()),
            None => g,
        }
    }

    fn variations(signs: impl Iterator<Item = i32>) -> usize {
        let mut count = 0;
        let mut last = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Sign of the polynomial itself at `t`.
    pub fn sign_at(&self, t: &Rat) -> i32 {
        int_poly::sign_at(&self.chain[0], t)
    }

    pub fn variations_at(&self, t: &Rat) -> usize {
        Self::variations(self.chain.iter().map(|p| int_poly::sign_at(p, t)))
    }

    pub fn variations_at_infinity(&self, positive: bool) -> usize {
        Self::variations(self.chain.iter().map(|p| int_poly::sign_at_infinity(p, positive)))
    }

    /// Distinct real roots in the half-open interval `(a, b]`.
    pub fn count_between(&self, a: &Rat, b: &Rat) -> usize {
        self.variations_at(a) - self.variations_at(b)
    }

    /// Distinct real roots on the whole line.
    pub fn count_all(&self) -> usize {
        self.variations_at_infinity(false) - self.variations_at_infinity(true)
    }
}

/// An interval holding exactly one real root. Either `lo < hi` with neither
/// endpoint a root (the root lies strictly inside), or `lo == hi` and the
/// endpoint is the root itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootInterval {
    #[serde(with = "serde_rat")]
    pub lo: Rat,
    #[serde(with = "serde_rat")]
    pub hi: Rat,
}

impl RootInterval {
    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / Rat::from_integer(BigInt::from(2))
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootIsolation {
    /// Isolating intervals of the finite roots `[t : 1]`, sorted.
    pub intervals: Vec<RootInterval>,
    /// Whether the finite part is free of repeated roots.
    pub squarefree: bool,
    /// Multiplicity of the root `[1 : 0]`.
    pub infinity_multiplicity: usize,
}

impl RootIsolation {
    pub fn projective_count(&self) -> usize {
        self.intervals.len() + usize::from(self.infinity_multiplicity > 0)
    }
}

/// Isolates the real roots of a squarefree polynomial.
pub fn isolate_univariate(p: &UniPoly) -> Vec<RootInterval> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    isolate_with(p, &SturmSequence::new(p))
}

fn isolate_with(p: &UniPoly, sturm: &SturmSequence) -> Vec<RootInterval> {
    let bound = p.root_bound();
    let (lo, hi) = (-bound.clone(), bound);
    let total = sturm.count_all();
    let mut out = Vec::new();
    let mut stack = vec![(lo, hi, total)];
    while let Some((lo, hi, count)) = stack.pop() {
        match count {
            0 => {}
            1 => out.push(RootInterval { lo, hi }),
            _ => {
                let mid = split_point(sturm, &lo, &hi);
                let left = sturm.count_between(&lo, &mid);
                stack.push((mid.clone(), hi, count - left));
                stack.push((lo, mid, left));
            }
        }
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

/// A rational strictly inside `(lo, hi)` that is not a root.
fn split_point(sturm: &SturmSequence, lo: &Rat, hi: &Rat) -> Rat {
    let width = hi - lo;
    for n in 2i64.. {
        for j in 1..n {
            if n > 2 && j * 2 == n {
                continue;
            }
            let t = lo + &width * Rat::new(BigInt::from(j), BigInt::from(n));
            if sturm.sign_at(&t) != 0 {
                return t;
            }
        }
    }
    unreachable!()
}

/// Shrinks an isolating interval of a squarefree `p` to width at most `width`.
pub fn refine(p: &UniPoly, iv: &RootInterval, width: &Rat) -> RootInterval {
    let mut iv = iv.clone();
    if iv.is_exact() {
        return iv;
    }
    let ip = int_poly::from_rats(p.coeffs());
    let mut s_lo = int_poly::sign_at(&ip, &iv.lo);
    while iv.width() > *width {
        let mid = iv.midpoint();
        let s_mid = int_poly::sign_at(&ip, &mid);
        if s_mid == 0 {
            return RootInterval { lo: mid.clone(), hi: mid };
        }
        if s_mid == s_lo {
            iv.lo = mid;
            s_lo = s_mid;
        } else {
            iv.hi = mid;
        }
    }
    iv
}

/// The rational root inside an isolating interval, if there is one.
pub fn rational_root_in(p: &UniPoly, iv: &RootInterval) -> Option<Rat> {
    if iv.is_exact() {
        return Some(iv.lo.clone());
    }
    let prim = p.primitive();
    // A rational root a/q of an integer polynomial has q | lead, so lead * root
    // is an integer.
    let lead = prim.lead()?.abs();
    let iv = refine(&prim, iv, &(lead.recip() / Rat::from_integer(BigInt::from(2))));
    if iv.is_exact() {
        return Some(iv.lo);
    }
    let lo = (&iv.lo * &lead).floor().to_integer();
    let hi = (&iv.hi * &lead).ceil().to_integer();
    let mut n = lo;
    while n <= hi {
        let t = Rat::new(n.clone(), lead.to_integer());
        if t > iv.lo && t < iv.hi && prim.eval(&t).is_zero() {
            return Some(t);
        }
        n += 1;
    }
    None
}

/// All distinct real projective roots of a form as points `(a, b)` when every
/// one of them is rational; `None` if some real root is irrational.
pub fn rational_projective_roots(p: &BinaryForm) -> Result<Option<Vec<(Rat, Rat)>>> {
    if p.is_zero() {
        return Err(Error::ZeroForm);
    }
    let sqf = p.dehomogenize().squarefree_part();
    let mut out = Vec::new();
    for iv in isolate_univariate(&sqf) {
        match rational_root_in(&sqf, &iv) {
            Some(t) => out.push((t, Rat::one())),
            None => return Ok(None),
        }
    }
    if p.y_multiplicity() > 0 {
        out.push((Rat::one(), Rat::zero()));
    }
    Ok(Some(out))
}

/// Every rational real root of a form (irrational ones are skipped).
pub fn rational_roots_of(p: &BinaryForm) -> Vec<(Rat, Rat)> {
    if p.is_zero() {
        return Vec::new();
    }
    let sqf = p.dehomogenize().squarefree_part();
    let mut out: Vec<(Rat, Rat)> = isolate_univariate(&sqf)
        .iter()
        .filter_map(|iv| rational_root_in(&sqf, iv))
        .map(|t| (t, Rat::one()))
        .collect();
    if p.y_multiplicity() > 0 {
        out.push((Rat::one(), Rat::zero()));
    }
    out
}

pub fn count_distinct_real_roots(p: &BinaryForm) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroForm);
    }
    // Sturm counts distinct roots even when p(t, 1) has repeated ones.
    let u = p.dehomogenize();
    let finite = if u.degree().unwrap_or(0) == 0 {
        0
    } else {
        SturmSequence::new(&u).count_all()
    };
    Ok(finite + usize::from(p.y_multiplicity() > 0))
}

/// Number of distinct real projective roots and whether the form is
/// hyperbolic, from a single Sturm chain.
pub fn real_root_profile(p: &BinaryForm) -> Result<(usize, bool)> {
    if p.is_zero() {
        return Err(Error::ZeroForm);
    }
    let inf = p.y_multiplicity();
    let u = p.dehomogenize();
    let (finite, squarefree) = if u.degree().unwrap_or(0) == 0 {
        (0, true)
    } else {
        let sturm = SturmSequence::new(&u);
        (sturm.count_all(), sturm.gcd_with_derivative().degree() == Some(0))
    };
    let distinct = finite + usize::from(inf > 0);
    Ok((distinct, inf <= 1 && squarefree && finite + inf == p.degree()))
}

/// Isolates the real projective roots of a squarefree form.
pub fn isolate_real_roots(p: &BinaryForm) -> Result<RootIsolation> {
    if p.is_zero() {
        return Err(Error::ZeroForm);
    }
    let u = p.dehomogenize();
    let inf = p.y_multiplicity();
    if inf > 1 || !u.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    Ok(RootIsolation {
        intervals: isolate_univariate(&u),
        squarefree: true,
        infinity_multiplicity: inf,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HyperbolicFailure {
    /// `gcd(p(t,1), p'(t,1))` is nonconstant.
    RepeatedFiniteRoot { gcd: UniPoly },
    /// `y^2` divides the form.
    RepeatedRootAtInfinity { multiplicity: usize },
    /// Fewer distinct real roots than the degree.
    RealRootDeficit { real_roots: usize, degree: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperbolicityCertificate {
    pub subject: BinaryForm,
    pub hyperbolic: bool,
    pub isolation: Option<RootIsolation>,
    pub failure: Option<HyperbolicFailure>,
}

impl HyperbolicityCertificate {
    /// Recomputes the verdict and compares it with the stored one.
    pub fn replay(&self) -> Result<()> {
        let fresh = is_hyperbolic(&self.subject)?;
        if fresh != *self {
            return Err(Error::Verification(format!(
                "hyperbolicity certificate for {} does not replay",
                self.subject
            )));
        }
        Ok(())
    }
}

/// Decides whether `p` factors into `deg p` pairwise distinct real linear forms.
pub fn is_hyperbolic(p: &BinaryForm) -> Result<HyperbolicityCertificate> {
    if p.is_zero() {
        return Err(Error::ZeroForm);
    }
    let d = p.degree();
    let fail = |failure| {
        Ok(HyperbolicityCertificate {
            subject: p.clone(),
            hyperbolic: false,
            isolation: None,
            failure: Some(failure),
        })
    };
    let inf = p.y_multiplicity();
    if inf > 1 {
        return fail(HyperbolicFailure::RepeatedRootAtInfinity { multiplicity: inf });
    }
    let u = p.dehomogenize();
    let sturm = (u.degree().unwrap_or(0) > 0).then(|| SturmSequence::new(&u));
    if let Some(sturm) = &sturm {
        let g = sturm.gcd_with_derivative();
        if g.degree() != Some(0) {
            return fail(HyperbolicFailure::RepeatedFiniteRoot { gcd: g });
        }
    }
    let finite = sturm.as_ref().map_or(0, SturmSequence::count_all);
    let real = finite + inf;
    if real != d {
        return fail(HyperbolicFailure::RealRootDeficit {
            real_roots: real,
            degree: d,
        });
    }
    Ok(HyperbolicityCertificate {
        subject: p.clone(),
        hyperbolic: true,
        isolation: Some(RootIsolation {
            intervals: sturm.as_ref().map_or_else(Vec::new, |st| isolate_with(&u, st)),
            squarefree: true,
            infinity_multiplicity: inf,
        }),
        failure: None,
    })
}

pub fn hyperbolic(p: &BinaryForm) -> bool {
    is_hyperbolic(p).map(|c| c.hyperbolic).unwrap_or(false)
}

/// Resultant of two binary forms from the determinant of their Sylvester
/// matrix; it vanishes exactly when they share a complex projective root.
pub fn resultant(p: &BinaryForm, q: &BinaryForm) -> Result<Rat> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroForm);
    }
    let (m, n) = (p.degree(), q.degree());
    let size = m + n;
    if size == 0 {
        return Ok(Rat::one());
    }
    let mut s = crate::linalg::Matrix::zeros(size, size);
    // rows hold shifted coefficient vectors in descending powers of x
    for i in 0..n {
        for (k, c) in p.coeffs().iter().rev().enumerate() {
            s.set(i, i + k, c.clone());
        }
    }
    for i in 0..m {
        for (k, c) in q.coeffs().iter().rev().enumerate() {
            s.set(n + i, i + k, c.clone());
        }
    }
    Ok(s.det())
}

/// `gcd` of two forms' dehomogenizations, used to cross-check resultants.
pub fn share_root(p: &BinaryForm, q: &BinaryForm) -> bool {
    if p.y_multiplicity() > 0 && q.y_multiplicity() > 0 {
        return true;
    }
    p.dehomogenize().gcd(&q.dehomogenize()).degree().unwrap_or(0) > 0
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sign;
    use crate::rat::{int, ratio};
    use proptest::prelude::*;

    fn f(c: &[i64]) -> BinaryForm {
        BinaryForm::from_ints(c)
    }

    #[test]
    fn integer_sign_matches_rational_eval() {
        let p = UniPoly::new(vec![ratio(-3, 2), int(0), ratio(5, 7), int(-1)]);
        let ip = int_poly::from_rats(p.coeffs());
        for t in [int(0), ratio(1, 3), ratio(-7, 5), int(4), ratio(22, 7)] {
            assert_eq!(int_poly::sign_at(&ip, &t), sign(&p.eval(&t)));
        }
    }

    #[test]
    fn pseudo_remainder_is_positive_multiple() {
        let a = UniPoly::new(vec![int(1), int(2), int(0), int(3), int(1)]);
        let b = UniPoly::new(vec![int(2), int(0), int(-5)]);
        let r = a.rem(&b);
        let pr = UniPoly::new(int_poly::to_rats(&int_poly::pseudo_rem(
            &int_poly::from_rats(a.coeffs()),
            &int_poly::from_rats(b.coeffs()),
        )));
        let ratio_ = pr.lead().unwrap() / r.lead().unwrap();
        assert!(ratio_ > Rat::zero());
        assert_eq!(r.scale(&ratio_), pr);
    }

    #[test]
    fn counts() {
        assert_eq!(count_distinct_real_roots(&f(&[-1, 0, 1])).unwrap(), 2);
        assert_eq!(count_distinct_real_roots(&f(&[1, 0, 1])).unwrap(), 0);
        // x^2 y
        assert_eq!(count_distinct_real_roots(&f(&[0, 0, 1, 0])).unwrap(), 2);
        assert_eq!(count_distinct_real_roots(&BinaryForm::zero(2)), Err(Error::ZeroForm));
    }

    #[test]
    fn hyperbolic_examples() {
        // xy(x-y)(x+y) = x^3 y - x y^3
        let p = f(&[0, -1, 0, 1, 0]);
        let c = is_hyperbolic(&p).unwrap();
        assert!(c.hyperbolic);
        assert_eq!(c.isolation.unwrap().projective_count(), 4);
        let c = is_hyperbolic(&f(&[0, 0, 1, 0])).unwrap();
        assert!(!c.hyperbolic);
        // x^3 + y^3: t^3 + 1 has one real root
        let c = is_hyperbolic(&f(&[1, 0, 0, 1])).unwrap();
        assert_eq!(
            c.failure,
            Some(HyperbolicFailure::RealRootDeficit { real_roots: 1, degree: 3 })
        );
        assert!(is_hyperbolic(&f(&[5])).unwrap().hyperbolic);
    }

    #[test]
    fn isolation_examples() {
        let iso = isolate_real_roots(&f(&[-2, 0, 1])).unwrap();
        assert_eq!(iso.intervals.len(), 2);
        let two = int(2);
        for iv in &iso.intervals {
            let (lo2, hi2) = (&iv.lo * &iv.lo, &iv.hi * &iv.hi);
            assert!(lo2.clone().min(hi2.clone()) < two && lo2.max(hi2) > two);
        }
        assert!(isolate_real_roots(&f(&[1, 0, 1])).unwrap().intervals.is_empty());
        let iso = isolate_real_roots(&f(&[0, 1, 0])).unwrap();
        assert_eq!(iso.intervals.len(), 1);
        assert_eq!(iso.infinity_multiplicity, 1);
        assert_eq!(isolate_real_roots(&f(&[1, 2, 1])), Err(Error::NotSquarefree));
    }

    #[test]
    fn refinement_reaches_width() {
        let p = f(&[-2, 0, 1]).dehomogenize();
        let iv = isolate_univariate(&p).pop().unwrap();
        let r = refine(&p, &iv, &ratio(1, 1 << 20));
        assert!(r.width() <= ratio(1, 1 << 20));
        assert!(sign(&p.eval(&r.lo)) != sign(&p.eval(&r.hi)));
        assert_eq!(rational_root_in(&p, &iv), None);
    }

    #[test]
    fn rational_roots_found() {
        let p = BinaryForm::from_roots(&[ratio(2, 3), ratio(-5, 7), int(0)]);
        let mut roots: Vec<Rat> = rational_projective_roots(&p)
            .unwrap()
            .unwrap()
            .into_iter()
            .map(|(a, _)| a)
            .collect();
        roots.sort();
        assert_eq!(roots, vec![ratio(-5, 7), int(0), ratio(2, 3)]);
        assert_eq!(rational_projective_roots(&f(&[-2, 0, 1])).unwrap(), None);
    }

    #[test]
    fn resultant_examples() {
        assert_eq!(resultant(&BinaryForm::x(), &BinaryForm::y()).unwrap().abs(), int(1));
        assert!(resultant(&f(&[0, 0, 1]), &f(&[0, 1, 0])).unwrap().is_zero());
        // Res(x^2+y^2, x^2-y^2): Sylvester determinant of
        // [1 0 1 0; 0 1 0 1; 1 0 -1 0; 0 1 0 -1] = 4
        assert_eq!(resultant(&f(&[1, 0, 1]), &f(&[-1, 0, 1])).unwrap(), int(4));
        assert_eq!(resultant(&f(&[1]), &f(&[3, 1])).unwrap(), int(1));
    }

    fn product_of(roots: &[i64], quad_power: usize, y_factor: bool) -> BinaryForm {
        let mut p = BinaryForm::from_roots(&roots.iter().map(|&r| int(r)).collect::<Vec<_>>());
        p = &p * &f(&[1, 1, 1]).pow(quad_power);
        if y_factor {
            p = &p * &BinaryForm::y();
        }
        p
    }

    proptest! {
        #[test]
        fn sturm_soundness(roots in prop::collection::btree_set(-20i64..20, 0..6),
                           quad in 0usize..3, yf: bool) {
            let roots: Vec<i64> = roots.into_iter().collect();
            let p = product_of(&roots, quad, yf);
            prop_assert_eq!(count_distinct_real_roots(&p).unwrap(), roots.len() + usize::from(yf));
        }

        #[test]
        fn hyperbolic_matches_factors(roots in prop::collection::vec(-6i64..6, 1..6),
                                      yf: bool, quad: bool) {
            let p = product_of(&roots, usize::from(quad), yf);
            let distinct = roots.iter().collect::<std::collections::BTreeSet<_>>().len() == roots.len();
            prop_assert_eq!(hyperbolic(&p), distinct && !quad);
        }

        #[test]
        fn resultant_vanishes_iff_common_factor(a in prop::collection::vec(-4i64..4, 2..5),
                                                b in prop::collection::vec(-4i64..4, 2..5),
                                                shared in prop::option::of(-3i64..3)) {
            let mut p = f(&a);
            let mut q = f(&b);
            prop_assume!(!p.is_zero() && !q.is_zero());
            if let Some(r) = shared {
                let l = BinaryForm::vanishing_at(&int(r), &int(1));
                p = &p * &l;
                q = &q * &l;
            }
            let res = resultant(&p, &q).unwrap();
            prop_assert_eq!(res.is_zero(), share_root(&p, &q));
        }
    }
}
