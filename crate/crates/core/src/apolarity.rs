//! Catalecticants and the apolar ideal of a binary form.
//!
//! The degree-`e` piece of `f⊥` is the kernel of the catalecticant
//! `h ↦ ∂h(f)` from degree-`e` forms to degree-`(d - e)` forms. Binary apolar
//! ideals are complete intersections `⟨g1, g2⟩` with `deg g1 + deg g2 = d + 2`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::linalg::Matrix;
use crate::poly::{apply_apolar, BinaryForm};
use crate::rat::{serde_rat, Rat};
use crate::roots::resultant;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct Catalecticant {
    pub source_degree: usize,
    pub target_degree: usize,
    /// `(d - e + 1) x (e + 1)`; column `j` is `∂(x^j y^(e-j)) f`.
    pub matrix: Matrix,
    pub rank: usize,
    pub kernel: Vec<BinaryForm>,
}

pub fn catalecticant(f: &BinaryForm, e: usize) -> Result<Catalecticant> {
    let d = f.degree();
    if e > d {
        return Err(Error::DegreeOutOfRange(format!(
            "catalecticant degree {e} exceeds form degree {d}"
        )));
    }
    let columns: Vec<Vec<Rat>> = (0..=e)
        .map(|j| {
            apply_apolar(&BinaryForm::monomial(j, e), f)
                .map(BinaryForm::into_coeffs)
        })
        .collect::<Result<_>>()?;
    let matrix = Matrix::from_columns(&columns, d - e + 1);
    let rank = matrix.rank();
    let kernel = matrix.nullspace().into_iter().map(BinaryForm::new).collect();
    Ok(Catalecticant {
        source_degree: e,
        target_degree: d - e,
        matrix,
        rank,
        kernel,
    })
}

/// A basis of `(f⊥)_e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedPiece {
    pub degree: usize,
    pub basis: Vec<BinaryForm>,
}

impl GradedPiece {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `sum_i c_i basis_i`.
    pub fn combine(&self, c: &[Rat]) -> BinaryForm {
        assert_eq!(c.len(), self.basis.len());
        self.basis
            .iter()
            .zip(c)
            .fold(BinaryForm::zero(self.degree), |acc, (b, ci)| {
                &acc + &b.scale(ci)
            })
    }
}

pub fn apolar_graded_piece(f: &BinaryForm, e: usize) -> Result<GradedPiece> {
    let d = f.degree();
    if e > d + 2 {
        return Err(Error::DegreeOutOfRange(format!(
            "graded piece {e} requested for a degree-{d} form (max {})",
            d + 2
        )));
    }
    let basis = if e > d {
        // every form of degree above d annihilates f
        (0..=e).map(|j| BinaryForm::monomial(j, e)).collect()
    } else {
        catalecticant(f, e)?.kernel
    };
    Ok(GradedPiece { degree: e, basis })
}

/// Generators `g1, g2` of `f⊥` with `deg g1 <= deg g2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApolarPair {
    pub g1: BinaryForm,
    pub g2: BinaryForm,
    #[serde(with = "serde_rat")]
    pub resultant: Rat,
    pub generic_degrees: bool,
}

impl ApolarPair {
    pub fn degrees(&self) -> (usize, usize) {
        (self.g1.degree(), self.g2.degree())
    }
}

/// The generator degrees of a general form of degree `d`.
pub fn generic_degree_pair(d: usize) -> (usize, usize) {
    let d1 = (d + 2) / 2;
    (d1, d + 2 - d1)
}

/// Reduces `v` modulo the row space of `span` (given in reduced echelon form
/// with its pivot columns).
fn reduce_modulo(v: &[Rat], span: &Matrix, pivots: &[usize]) -> Vec<Rat> {
    let mut v = v.to_vec();
    for (r, &p) in pivots.iter().enumerate() {
        if v[p].is_zero() {
            continue;
        }
        let c = v[p].clone();
        for (x, s) in v.iter_mut().zip(&span.row_vecs()[r]) {
            *x -= &c * s;
        }
    }
    v
}

/// Multiples `x^j y^(k-j) g` spanning `⟨g⟩` in degree `deg g + k`.
pub fn multiples(g: &BinaryForm, k: usize) -> Vec<BinaryForm> {
    (0..=k).map(|j| g * &BinaryForm::monomial(j, k)).collect()
}

pub fn apolar_generators(f: &BinaryForm) -> Result<ApolarPair> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let d = f.degree();
    let (d1, low) = (1..=d + 1)
        .map(|e| apolar_graded_piece(f, e).map(|p| (e, p)))
        .find(|r| r.as_ref().map_or(true, |(_, p)| p.dim() > 0))
        .expect("degree d + 1 piece is never empty")?;
    let g1 = low.basis[0].primitive();
    let d2 = d + 2 - d1;
    let (candidates, known) = if low.dim() >= 2 {
        (low.basis[1..].to_vec(), vec![g1.clone()])
    } else {
        (apolar_graded_piece(f, d2)?.basis, multiples(&g1, d2 - d1))
    };
    let mut span = Matrix::from_rows(
        known.iter().map(|g| g.coeffs().to_vec()).collect(),
        d2 + 1,
    );
    let pivots = span.rref();
    let g2 = candidates
        .iter()
        .map(|c| reduce_modulo(c.coeffs(), &span, &pivots))
        .find(|v| v.iter().any(|x| !x.is_zero()))
        .map(|v| BinaryForm::new(v).primitive())
        .ok_or_else(|| Error::Internal(format!("no second generator in degree {d2}")))?;
    let res = resultant(&g1, &g2)?;
    if res.is_zero() {
        return Err(Error::Internal(format!(
            "apolar generators {g1} and {g2} share a root"
        )));
    }
    Ok(ApolarPair {
        generic_degrees: (d1, d2) == generic_degree_pair(d),
        g1,
        g2,
        resultant: res,
    })
}

/// Whether the middle catalecticant of `f` has full rank.
pub fn is_generic_degrees(f: &BinaryForm) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let k = f.degree() / 2;
    Ok(catalecticant(f, k)?.rank == k + 1)
}

/// The form (up to scale) whose apolar ideal is `⟨g1, g2⟩`, normalized so
/// that its first nonzero coefficient is 1.
pub fn form_from_apolar(g1: &BinaryForm, g2: &BinaryForm) -> Result<BinaryForm> {
    if resultant(g1, g2)?.is_zero() {
        return Err(Error::CommonRoot);
    }
    let total = g1.degree() + g2.degree();
    if total < 2 {
        return Err(Error::DegreeOutOfRange(
            "generator degrees must sum to at least 2".into(),
        ));
    }
    let target = total - 2;
    let mut rows = Vec::new();
    for g in [g1, g2] {
        if g.degree() > target {
            continue;
        }
        let columns: Vec<Vec<Rat>> = (0..=target)
            .map(|i| {
                apply_apolar(g, &BinaryForm::monomial(i, target)).map(BinaryForm::into_coeffs)
            })
            .collect::<Result<_>>()?;
        let m = Matrix::from_columns(&columns, target - g.degree() + 1);
        rows.extend(m.row_vecs().iter().cloned());
    }
    let kernel = Matrix::from_rows(rows, target + 1).nullspace();
    if kernel.len() != 1 {
        return Err(Error::Internal(format!(
            "joint annihilator of {g1} and {g2} has dimension {}",
            kernel.len()
        )));
    }
    Ok(BinaryForm::new(kernel.into_iter().next().unwrap()).normalize_first())
}

/// Multipliers with `s = g1 q1 + g2 q2`; a multiplier is `None` when its
/// degree would be negative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Syzygy {
    pub q1: Option<BinaryForm>,
    pub q2: Option<BinaryForm>,
}

impl Syzygy {
    pub fn recombine(&self, g1: &BinaryForm, g2: &BinaryForm, degree: usize) -> BinaryForm {
        let mut s = BinaryForm::zero(degree);
        if let Some(q) = &self.q1 {
            s = &s + &(g1 * q);
        }
        if let Some(q) = &self.q2 {
            s = &s + &(g2 * q);
        }
        s
    }
}

/// Writes `s` in the ideal `⟨g1, g2⟩`. The representation is unique while
/// `deg s < deg g1 + deg g2`.
pub fn syzygy_representation(s: &BinaryForm, g1: &BinaryForm, g2: &BinaryForm) -> Result<Syzygy> {
    let e = s.degree();
    if e >= g1.degree() + g2.degree() {
        return Err(Error::DegreeOutOfRange(format!(
            "degree {e} is not below the generator degree sum {}",
            g1.degree() + g2.degree()
        )));
    }
    let n1 = e.checked_sub(g1.degree());
    let n2 = e.checked_sub(g2.degree());
    let mut columns = Vec::new();
    for (g, n) in [(g1, n1), (g2, n2)] {
        if let Some(n) = n {
            columns.extend(multiples(g, n).into_iter().map(BinaryForm::into_coeffs));
        }
    }
    let m = Matrix::from_columns(&columns, e + 1);
    let x = m
        .solve(s.coeffs())
        .ok_or_else(|| Error::NotInIdeal(format!("{s} is not in ⟨{g1}, {g2}⟩")))?;
    let split = n1.map_or(0, |n| n + 1);
    Ok(Syzygy {
        q1: n1.map(|_| BinaryForm::new(x[..split].to_vec())),
        q2: n2.map(|_| BinaryForm::new(x[split..].to_vec())),
    })
}
