//! Complex and real Waring ranks with per-degree evidence.
//!
//! The real rank of `f` is the least degree `m` for which `(f⊥)_m` contains
//! a form with `m` distinct real roots. Each degree below the reported rank
//! carries evidence that no such form exists there, tagged with how it was
//! obtained:
//!
//! * `EXACT`: the piece has dimension at most 2 and the question was decided
//!   exactly (empty piece, a single Sturm check, or the pencil decision).
//! * `THEOREM_BACKED`: the claim is imported from a known theorem.
//! * `EMPIRICAL`: a deterministic search over the piece found nothing.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::apolarity::{apolar_generators, apolar_graded_piece, catalecticant, GradedPiece};
use crate::linalg::Matrix;
use crate::poly::{annihilates, apply_apolar, BinaryForm};
use crate::rat::{int, ratio, serde_opt_rat, serde_rat, Rat};
use crate::rng::SeededRng;
use crate::roots::{
    is_hyperbolic, isolate_univariate, rational_projective_roots, real_root_profile, resultant,
    HyperbolicityCertificate, RootInterval, UniPoly,
};
use crate::{Error, Result};

/// Evidence strength, ordered from weakest to strongest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Rigor {
    Empirical,
    TheoremBacked,
    Exact,
}

impl std::fmt::Display for Rigor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Rigor::Empirical => "EMPIRICAL",
            Rigor::TheoremBacked => "THEOREM_BACKED",
            Rigor::Exact => "EXACT",
        })
    }
}

/// What a piece of evidence claims; its strength is given by [`Rigor`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NoHyperbolicForm,
}

// ---------------------------------------------------------------------------
// pencils

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilSample {
    /// Parameter of `A + tB`; `None` stands for `B` itself.
    #[serde(with = "serde_opt_rat")]
    pub t: Option<Rat>,
    pub distinct_real_roots: usize,
    pub hyperbolic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilDecisionTrace {
    pub a: BinaryForm,
    pub b: BinaryForm,
    /// Discriminant of `A + tB` as a polynomial in `t`.
    pub discriminant: UniPoly,
    /// Coefficient of `x^n` in `A + tB`.
    pub leading: UniPoly,
    /// Isolating intervals of the real roots of the cell boundaries.
    pub boundaries: Vec<RootInterval>,
    pub samples: Vec<PencilSample>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilDecision {
    pub contains_hyperbolic: bool,
    pub witness: Option<BinaryForm>,
    pub trace: PencilDecisionTrace,
}

/// Discriminant of a binary form up to a constant: the resultant of its two
/// partial derivatives, zero exactly when there is a repeated root.
fn form_discriminant(s: &BinaryForm) -> Rat {
    let dx = apply_apolar(&BinaryForm::x(), s).expect("degree >= 1");
    let dy = apply_apolar(&BinaryForm::y(), s).expect("degree >= 1");
    resultant(&dx, &dy).unwrap_or_else(|_| Rat::zero())
}

/// Lagrange interpolation through `(x_i, y_i)`.
fn interpolate(xs: &[Rat], ys: &[Rat]) -> UniPoly {
    let mut acc = UniPoly::zero();
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = UniPoly::new(vec![Rat::one()]);
        let mut denom = Rat::one();
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                basis = basis.mul(&UniPoly::new(vec![-xj.clone(), Rat::one()]));
                denom *= xi - xj;
            }
        }
        let term = basis.scale(&(yi / denom));
        let n = acc.coeffs().len().max(term.coeffs().len());
        let sum: Vec<Rat> = (0..n)
            .map(|k| {
                acc.coeffs().get(k).cloned().unwrap_or_else(Rat::zero)
                    + term.coeffs().get(k).cloned().unwrap_or_else(Rat::zero)
            })
            .collect();
        acc = UniPoly::new(sum);
    }
    acc
}

fn pencil_member(a: &BinaryForm, b: &BinaryForm, t: &Option<Rat>) -> BinaryForm {
    match t {
        Some(t) => a + &b.scale(t),
        None => b.clone(),
    }
}

fn independent(a: &BinaryForm, b: &BinaryForm) -> bool {
    let m = Matrix::from_rows(vec![a.coeffs().to_vec(), b.coeffs().to_vec()], a.degree() + 1);
    m.rank() == 2
}

/// Decides whether some member of the pencil `λA + μB` has all its roots real
/// and distinct.
///
/// The discriminant `D(t)` of `A + tB` and the leading coefficient `L(t)`
/// cut the parameter line into open cells; inside a cell the roots never
/// collide, so the number of real roots is constant. One rational sample per
/// cell plus `B` itself decides the question; members at cell boundaries have
/// a repeated root and are never hyperbolic.
pub fn pencil_contains_hyperbolic(a: &BinaryForm, b: &BinaryForm) -> Result<PencilDecision> {
    if a.degree() != b.degree() {
        return Err(Error::DegreeOutOfRange("pencil members differ in degree".into()));
    }
    if !independent(a, b) {
        return Err(Error::DependentPencil);
    }
    let n = a.degree();
    let leading = UniPoly::new(vec![a.coeff(n).clone(), b.coeff(n).clone()]);
    let discriminant = if n >= 2 {
        let xs: Vec<Rat> = (0..=2 * (n as i64 - 1)).map(int).collect();
        let ys: Vec<Rat> = xs
            .iter()
            .map(|t| form_discriminant(&(a + &b.scale(t))))
            .collect();
        interpolate(&xs, &ys)
    } else {
        UniPoly::new(vec![Rat::one()])
    };
    let mut critical = discriminant.squarefree_part();
    if leading.degree().unwrap_or(0) > 0 {
        critical = critical.mul(&leading).squarefree_part();
    }
    let boundaries = if discriminant.is_zero() {
        Vec::new()
    } else {
        isolate_univariate(&critical)
    };
    let mut params: Vec<Option<Rat>> = vec![Some(Rat::zero()), None];
    if !discriminant.is_zero() && !boundaries.is_empty() {
        let bound = critical.root_bound() + Rat::one();
        params.push(Some(-bound.clone()));
        for w in boundaries.windows(2) {
            params.push(Some((&w[0].hi + &w[1].lo) / int(2)));
        }
        params.push(Some(bound));
    }
    let mut samples = Vec::new();
    let mut witness = None;
    for t in params {
        let s = pencil_member(a, b, &t);
        let (distinct_real_roots, hyperbolic) = real_root_profile(&s)?;
        samples.push(PencilSample {
            t,
            distinct_real_roots,
            hyperbolic,
        });
        if hyperbolic {
            witness = Some(s);
            break;
        }
    }
    Ok(PencilDecision {
        contains_hyperbolic: witness.is_some(),
        witness,
        trace: PencilDecisionTrace {
            a: a.clone(),
            b: b.clone(),
            discriminant,
            leading,
            boundaries,
            samples,
        },
    })
}

// ---------------------------------------------------------------------------
// searches in larger pieces

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Number of points from the fixed rational grid used to prescribe roots.
    pub grid_points: usize,
    /// Cap on candidates vanishing at `dim - 1` grid points.
    pub max_prescriptions: usize,
    /// Cap on pencils vanishing at `dim - 2` grid points.
    pub max_prescribed_pencils: usize,
    /// Number of seeded random pencils, spanned by integer combinations of the
    /// basis with entries in `[-random_height, random_height]`.
    pub random_pencils: usize,
    pub random_height: i64,
    pub seed: u64,
    /// Largest absolute coefficient for the direct enumeration phase.
    pub max_height: i64,
    /// Cap on direct-enumeration candidates.
    pub max_directions: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            grid_points: 11,
            max_prescriptions: 200,
            max_prescribed_pencils: 40,
            random_pencils: 6,
            random_height: 3,
            seed: 0x5eed,
            max_height: 1,
            max_directions: 80,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCounts {
    pub prescriptions: usize,
    pub prescribed_pencils: usize,
    pub random_pencils: usize,
    pub directions: usize,
}

impl SearchCounts {
    pub fn total(&self) -> usize {
        self.prescriptions + self.prescribed_pencils + self.random_pencils + self.directions
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub config: SearchConfig,
    pub dimension: usize,
    pub tested: SearchCounts,
    pub found: Option<BinaryForm>,
}

/// The `k`-th point of the fixed projective grid
/// `0, ∞, 1, -1, 1/2, -1/2, 2, -2, 1/3, -1/3, 2/3, ...`.
pub fn grid_point(k: usize) -> (Rat, Rat) {
    if k == 0 {
        return (Rat::zero(), Rat::one());
    }
    if k == 1 {
        return (Rat::one(), Rat::zero());
    }
    let mut idx = 2;
    for h in 1i64.. {
        for p in 1..=h {
            for q in 1..=h {
                if p.max(q) != h || num_integer::Integer::gcd(&p, &q) != 1 {
                    continue;
                }
                for sign in [1, -1] {
                    if idx == k {
                        return (ratio(sign * p, q), Rat::one());
                    }
                    idx += 1;
                }
            }
        }
    }
    unreachable!()
}

/// Subsets of `0..n` of size `k`, ordered by their largest element.
fn subsets_by_max(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, end: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..end {
            cur.push(i);
            rec(i + 1, end, k - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k == 0 {
        out.push(Vec::new());
        return out;
    }
    for top in k - 1..n {
        let mut cur = Vec::new();
        let mut part = Vec::new();
        rec(0, top, k - 1, &mut cur, &mut part);
        for mut p in part {
            p.push(top);
            out.push(p);
        }
    }
    out
}

/// Integer vectors of length `k` with max-norm exactly `h` and first nonzero
/// entry positive.
fn directions_of_height(k: usize, h: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut v = vec![-h; k];
    loop {
        let first = v.iter().find(|&&x| x != 0);
        if first.is_some_and(|&x| x > 0) && v.iter().any(|x| x.abs() == h) {
            out.push(v.clone());
        }
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if v[i] < h {
                v[i] += 1;
                break;
            }
            v[i] = -h;
        }
    }
}

fn hyperbolic_candidate(s: &BinaryForm) -> Result<Option<BinaryForm>> {
    if !s.is_zero() && is_hyperbolic(s)?.hyperbolic {
        Ok(Some(s.primitive()))
    } else {
        Ok(None)
    }
}

fn pencil_candidate(a: &BinaryForm, b: &BinaryForm) -> Result<Option<BinaryForm>> {
    if a.is_zero() || b.is_zero() || !independent(a, b) {
        return Ok(None);
    }
    Ok(pencil_contains_hyperbolic(a, b)?.witness.map(|s| s.primitive()))
}

/// A hyperbolic member of the degree-`e` apolar piece whose roots are all
/// rational, found among members vanishing at `dim - 1` grid points. Such a
/// witness gives an exact power-sum decomposition.
pub fn rational_witness(f: &BinaryForm, e: usize, max_prescriptions: usize) -> Result<Option<BinaryForm>> {
    let piece = apolar_graded_piece(f, e)?;
    let k = piece.dim();
    if k == 0 {
        return Ok(None);
    }
    let accept = |s: BinaryForm| -> Result<Option<BinaryForm>> {
        if s.is_zero() || rational_projective_roots(&s)?.is_none() {
            return Ok(None);
        }
        hyperbolic_candidate(&s)
    };
    if k == 1 {
        return accept(piece.basis[0].clone());
    }
    let grid: Vec<(Rat, Rat)> = (0..e + 8).map(grid_point).collect();
    let evals: Vec<Vec<Rat>> = grid
        .iter()
        .map(|(a, b)| piece.basis.iter().map(|g| g.eval(a, b)).collect())
        .collect();
    for subset in subsets_by_max(grid.len(), k - 1).into_iter().take(max_prescriptions) {
        let rows: Vec<Vec<Rat>> = subset.iter().map(|&i| evals[i].clone()).collect();
        let kernel = Matrix::from_rows(rows, k).nullspace();
        if kernel.len() == 1 {
            if let Some(s) = accept(piece.combine(&kernel[0]))? {
                return Ok(Some(s));
            }
        }
    }
    Ok(None)
}

/// Looks for a hyperbolic form in a graded piece. A returned witness is
/// exact; failing to find one proves nothing when the dimension exceeds 2.
///
/// Deterministic phases, each capped by the config:
/// 1. members vanishing at `dim - 1` grid points;
/// 2. pencils of members vanishing at `dim - 2` grid points, decided exactly;
/// 3. seeded random pencils, decided exactly;
/// 4. small integer combinations of the basis in order of height.
pub fn subspace_hyperbolic_search(piece: &GradedPiece, config: &SearchConfig) -> Result<SearchReport> {
    let k = piece.dim();
    let mut report = SearchReport {
        config: config.clone(),
        dimension: k,
        tested: SearchCounts::default(),
        found: None,
    };
    if k == 0 {
        return Ok(report);
    }
    if k == 1 {
        report.tested.directions = 1;
        report.found = hyperbolic_candidate(&piece.basis[0])?;
        return Ok(report);
    }
    if k == 2 {
        report.tested.prescribed_pencils = 1;
        report.found = pencil_candidate(&piece.basis[0], &piece.basis[1])?;
        return Ok(report);
    }
    let grid: Vec<(Rat, Rat)> = (0..config.grid_points).map(grid_point).collect();
    let evals: Vec<Vec<Rat>> = grid
        .iter()
        .map(|(a, b)| piece.basis.iter().map(|g| g.eval(a, b)).collect())
        .collect();
    let kernel_of = |subset: &[usize]| {
        let rows: Vec<Vec<Rat>> = subset.iter().map(|&i| evals[i].clone()).collect();
        Matrix::from_rows(rows, k).nullspace()
    };

    if k - 1 <= grid.len() {
        for subset in subsets_by_max(grid.len(), k - 1) {
            if report.tested.prescriptions >= config.max_prescriptions {
                break;
            }
            report.tested.prescriptions += 1;
            let kernel = kernel_of(&subset);
            if kernel.len() == 1 {
                if let Some(s) = hyperbolic_candidate(&piece.combine(&kernel[0]))? {
                    report.found = Some(s);
                    return Ok(report);
                }
            }
        }
    }

    if k - 2 <= grid.len() {
        for subset in subsets_by_max(grid.len(), k - 2) {
            if report.tested.prescribed_pencils >= config.max_prescribed_pencils {
                break;
            }
            report.tested.prescribed_pencils += 1;
            let kernel = kernel_of(&subset);
            if kernel.len() == 2 {
                let a = piece.combine(&kernel[0]);
                let b = piece.combine(&kernel[1]);
                if let Some(s) = pencil_candidate(&a, &b)? {
                    report.found = Some(s);
                    return Ok(report);
                }
            }
        }
    }

    let mut rng = SeededRng::new(config.seed);
    for _ in 0..config.random_pencils {
        report.tested.random_pencils += 1;
        let h = config.random_height;
        let u: Vec<Rat> = (0..k).map(|_| int(rng.int(-h, h))).collect();
        let v: Vec<Rat> = (0..k).map(|_| int(rng.int(-h, h))).collect();
        if let Some(s) = pencil_candidate(&piece.combine(&u), &piece.combine(&v))? {
            report.found = Some(s);
            return Ok(report);
        }
    }

    'outer: for h in 1..=config.max_height {
        for dir in directions_of_height(k, h) {
            if report.tested.directions >= config.max_directions {
                break 'outer;
            }
            report.tested.directions += 1;
            let c: Vec<Rat> = dir.iter().map(|&v| int(v)).collect();
            if let Some(s) = hyperbolic_candidate(&piece.combine(&c))? {
                report.found = Some(s);
                return Ok(report);
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// rank certificates

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EvidencePayload {
    /// The graded piece is zero.
    EmptyPiece,
    /// The piece is spanned by one form, which is not hyperbolic.
    SingleForm { certificate: HyperbolicityCertificate },
    /// The piece is a pencil without hyperbolic members.
    Pencil { trace: PencilDecisionTrace },
    /// Imported from a known result.
    Fact { fact: String, statement: String },
    /// Deterministic search without a hit.
    Search { report: SearchReport },
    /// The piece is contained in the same-degree piece of the apolar ideal
    /// of `ancestor`, whose evidence is carried along.
    Inherited { ancestor: BinaryForm, evidence: Box<LowerBoundEvidence> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerBoundEvidence {
    pub degree: usize,
    pub dimension: usize,
    pub verdict: Verdict,
    pub rigor: Rigor,
    pub payload: EvidencePayload,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCertificate {
    pub form: BinaryForm,
    pub rank: usize,
    pub generator_degrees: (usize, usize),
    pub witness: BinaryForm,
    pub witness_certificate: HyperbolicityCertificate,
    /// One entry for each degree `1 <= e < rank`.
    pub lower_bounds: Vec<LowerBoundEvidence>,
    pub rigor: Rigor,
}

impl RankCertificate {
    pub fn lower_bound_rigor(&self) -> Rigor {
        self.lower_bounds
            .iter()
            .map(|e| e.rigor)
            .min()
            .unwrap_or(Rigor::Exact)
    }

    pub fn evidence_at(&self, degree: usize) -> Option<&LowerBoundEvidence> {
        self.lower_bounds.iter().find(|e| e.degree == degree)
    }
}

/// Result of examining one graded piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PieceOutcome {
    Witness(BinaryForm),
    Absent(LowerBoundEvidence),
}

/// Exact for dimension at most 2, a search otherwise.
pub fn examine_piece(piece: &GradedPiece, config: &SearchConfig) -> Result<PieceOutcome> {
    let evidence = |rigor, payload| LowerBoundEvidence {
        degree: piece.degree,
        dimension: piece.dim(),
        verdict: Verdict::NoHyperbolicForm,
        rigor,
        payload,
    };
    Ok(match piece.dim() {
        0 => PieceOutcome::Absent(evidence(Rigor::Exact, EvidencePayload::EmptyPiece)),
        1 => {
            let s = piece.basis[0].primitive();
            let certificate = is_hyperbolic(&s)?;
            if certificate.hyperbolic {
                PieceOutcome::Witness(s)
            } else {
                PieceOutcome::Absent(evidence(Rigor::Exact, EvidencePayload::SingleForm { certificate }))
            }
        }
        2 => {
            let a = piece.basis[0].primitive();
            let b = piece.basis[1].primitive();
            let decision = pencil_contains_hyperbolic(&a, &b)?;
            match decision.witness {
                Some(s) => PieceOutcome::Witness(s.primitive()),
                None => PieceOutcome::Absent(evidence(
                    Rigor::Exact,
                    EvidencePayload::Pencil { trace: decision.trace },
                )),
            }
        }
        _ => {
            let report = subspace_hyperbolic_search(piece, config)?;
            match report.found {
                Some(s) => PieceOutcome::Witness(s),
                None => PieceOutcome::Absent(evidence(Rigor::Empirical, EvidencePayload::Search { report })),
            }
        }
    })
}

/// Lower-bound evidence for degree `e` of `f⊥` (without looking for witnesses
/// at higher degrees). Returns `None` when the piece contains a hyperbolic form.
pub fn lower_bound_at(f: &BinaryForm, e: usize, config: &SearchConfig) -> Result<Option<LowerBoundEvidence>> {
    let piece = apolar_graded_piece(f, e)?;
    Ok(match examine_piece(&piece, config)? {
        PieceOutcome::Witness(_) => None,
        PieceOutcome::Absent(ev) => Some(ev),
    })
}

pub fn real_rank_search(f: &BinaryForm) -> Result<RankCertificate> {
    real_rank_search_with(f, &SearchConfig::default())
}

pub fn real_rank_search_with(f: &BinaryForm, config: &SearchConfig) -> Result<RankCertificate> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let d = f.degree();
    if d == 0 {
        return Err(Error::DegreeOutOfRange("rank of a constant".into()));
    }
    let pair = apolar_generators(f)?;
    let mut lower_bounds = Vec::new();
    for e in 1..=d + 1 {
        let piece = apolar_graded_piece(f, e)?;
        match examine_piece(&piece, config)? {
            PieceOutcome::Absent(ev) => lower_bounds.push(ev),
            PieceOutcome::Witness(s) => {
                let witness_certificate = is_hyperbolic(&s)?;
                let rigor = weakest(&lower_bounds);
                return Ok(RankCertificate {
                    form: f.clone(),
                    rank: e,
                    generator_degrees: pair.degrees(),
                    witness: s,
                    witness_certificate,
                    lower_bounds,
                    rigor,
                });
            }
        }
    }
    Err(Error::Internal(format!("no hyperbolic form found up to degree {} for {f}", d + 1)))
}

pub fn weakest(evidence: &[LowerBoundEvidence]) -> Rigor {
    evidence.iter().map(|e| e.rigor).min().unwrap_or(Rigor::Exact)
}

/// Treatment of pieces of dimension 3 or more when certifying a known witness.
#[derive(Clone, Copy, Debug)]
pub enum LargePieces<'a> {
    Search(&'a SearchConfig),
    /// Absence follows from a known result and is recorded as such.
    Fact { fact: &'a str, statement: &'a str },
}

/// Rank certificate for `f` with the given hyperbolic witness in `f⊥`.
/// Returns `None` if some lower degree is found to contain a hyperbolic form.
pub fn certify_with_witness(
    f: &BinaryForm,
    s: &BinaryForm,
    large: LargePieces<'_>,
) -> Result<Option<RankCertificate>> {
    if !annihilates(s, f) {
        return Err(Error::NotApolar(format!("{s} does not annihilate {f}")));
    }
    let witness_certificate = is_hyperbolic(s)?;
    if !witness_certificate.hyperbolic {
        return Err(Error::NotHyperbolic(format!("{s}")));
    }
    let pair = apolar_generators(f)?;
    let mut lower_bounds = Vec::new();
    for e in 1..s.degree() {
        let piece = apolar_graded_piece(f, e)?;
        let outcome = match large {
            LargePieces::Fact { fact, statement } if piece.dim() > 2 => {
                PieceOutcome::Absent(LowerBoundEvidence {
                    degree: e,
                    dimension: piece.dim(),
                    verdict: Verdict::NoHyperbolicForm,
                    rigor: Rigor::TheoremBacked,
                    payload: EvidencePayload::Fact {
                        fact: fact.into(),
                        statement: statement.into(),
                    },
                })
            }
            LargePieces::Fact { .. } => examine_piece(&piece, &SearchConfig::default())?,
            LargePieces::Search(config) => examine_piece(&piece, config)?,
        };
        match outcome {
            PieceOutcome::Absent(ev) => lower_bounds.push(ev),
            PieceOutcome::Witness(_) => return Ok(None),
        }
    }
    Ok(Some(RankCertificate {
        form: f.clone(),
        rank: s.degree(),
        generator_degrees: pair.degrees(),
        witness: s.clone(),
        witness_certificate,
        rigor: weakest(&lower_bounds),
        lower_bounds,
    }))
}

/// Complex Waring rank: `d1` if the lowest-degree generator is squarefree,
/// otherwise `d + 2 - d1`.
pub fn complex_rank(f: &BinaryForm) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let d = f.degree();
    if d == 0 {
        return Err(Error::DegreeOutOfRange("rank of a constant".into()));
    }
    let pair = apolar_generators(f)?;
    let g1 = &pair.g1;
    let squarefree = g1.y_multiplicity() <= 1 && g1.dehomogenize().is_squarefree();
    let d1 = g1.degree();
    Ok(if squarefree { d1 } else { d + 2 - d1 })
}

// ---------------------------------------------------------------------------
// typicality

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericDegreesProof {
    pub middle_degree: usize,
    pub middle_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypicalityCertificate {
    pub form: BinaryForm,
    pub generic_degrees: GenericDegreesProof,
    pub rank: usize,
    pub witness: BinaryForm,
    pub witness_certificate: HyperbolicityCertificate,
    /// Evidence that `(f⊥)_(m-1)` has no hyperbolic form.
    pub below: LowerBoundEvidence,
    pub typical: bool,
    pub rigor: Rigor,
}

pub fn generic_degrees_proof(f: &BinaryForm) -> Result<GenericDegreesProof> {
    let k = f.degree() / 2;
    let rank = catalecticant(f, k)?.rank;
    if rank != k + 1 {
        return Err(Error::NonGenericDegrees(format!(
            "middle catalecticant of {f} has rank {rank} < {}; perturb the form first",
            k + 1
        )));
    }
    Ok(GenericDegreesProof {
        middle_degree: k,
        middle_rank: rank,
    })
}

fn empty_evidence(degree: usize) -> LowerBoundEvidence {
    LowerBoundEvidence {
        degree,
        dimension: 0,
        verdict: Verdict::NoHyperbolicForm,
        rigor: Rigor::Exact,
        payload: EvidencePayload::EmptyPiece,
    }
}

/// Bundles a rank certificate with the generic-degrees check and the
/// evidence one degree below the rank.
pub fn typicality_from(cert: &RankCertificate) -> Result<TypicalityCertificate> {
    let generic_degrees = generic_degrees_proof(&cert.form)?;
    let m = cert.rank;
    let below = if m <= 1 {
        empty_evidence(0)
    } else {
        cert.evidence_at(m - 1)
            .cloned()
            .ok_or_else(|| Error::Internal(format!("no evidence at degree {}", m - 1)))?
    };
    Ok(TypicalityCertificate {
        form: cert.form.clone(),
        generic_degrees,
        rank: m,
        witness: cert.witness.clone(),
        witness_certificate: cert.witness_certificate.clone(),
        typical: below.verdict == Verdict::NoHyperbolicForm,
        rigor: below.rigor,
        below,
    })
}

pub fn typicality_certificate(f: &BinaryForm) -> Result<TypicalityCertificate> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    generic_degrees_proof(f)?;
    typicality_from(&real_rank_search(f)?)
}

// ---------------------------------------------------------------------------
// perturbations

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbationSample {
    pub index: usize,
    pub form: BinaryForm,
    pub rank: usize,
    pub rigor: Rigor,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbationReport {
    pub form: BinaryForm,
    #[serde(with = "serde_rat")]
    pub radius: Rat,
    pub trials: usize,
    pub seed: u64,
    pub samples: Vec<PerturbationSample>,
    /// Certified rank -> number of trials.
    pub histogram: BTreeMap<usize, usize>,
    pub stable: bool,
}

impl PerturbationReport {
    pub fn summary(&self) -> String {
        self.histogram
            .iter()
            .map(|(r, n)| format!("rank {r} in {n}/{}", self.trials))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Grid of numerators used for perturbation coefficients (`radius * n / 1000`).
const PERTURBATION_STEPS: i64 = 1000;

pub fn perturb(f: &BinaryForm, radius: &Rat, seed: u64, index: usize) -> BinaryForm {
    let mut rng = SeededRng::split(seed, index as u64);
    let coeffs = f
        .coeffs()
        .iter()
        .map(|c| {
            let n = rng.int(-PERTURBATION_STEPS, PERTURBATION_STEPS);
            c + radius * Rat::new(BigInt::from(n), BigInt::from(PERTURBATION_STEPS))
        })
        .collect();
    BinaryForm::new(coeffs)
}

/// Recomputes the rank of `trials` seeded perturbations of `f` with sup-norm
/// at most `radius`.
pub fn perturbation_stability_test(
    f: &BinaryForm,
    radius: &Rat,
    trials: usize,
    seed: u64,
) -> Result<PerturbationReport> {
    let samples: Vec<PerturbationSample> = (0..trials)
        .into_par_iter()
        .map(|index| {
            let g = perturb(f, radius, seed, index);
            let cert = real_rank_search(&g)?;
            Ok(PerturbationSample {
                index,
                form: g,
                rank: cert.rank,
                rigor: cert.rigor,
            })
        })
        .collect::<Result<_>>()?;
    let mut histogram = BTreeMap::new();
    for s in &samples {
        *histogram.entry(s.rank).or_insert(0) += 1;
    }
    Ok(PerturbationReport {
        form: f.clone(),
        radius: radius.clone(),
        trials,
        seed,
        stable: histogram.len() <= 1,
        samples,
        histogram,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::ratio;

    fn f(c: &[i64]) -> BinaryForm {
        BinaryForm::from_ints(c)
    }

    #[test]
    fn complex_rank_examples() {
        assert_eq!(complex_rank(&BinaryForm::linear(int(1), int(1)).pow(5)).unwrap(), 1);
        assert_eq!(complex_rank(&f(&[0, 1, 0, 0, 0])).unwrap(), 4);
        assert_eq!(complex_rank(&f(&[3, -1, 4, 1, -5, 9, 2])).unwrap(), 4);
        assert_eq!(complex_rank(&BinaryForm::zero(3)), Err(Error::ZeroForm));
    }

    #[test]
    fn pencil_quadratic() {
        let d = pencil_contains_hyperbolic(&f(&[1, 0, 1]), &f(&[0, 1, 0])).unwrap();
        assert!(d.contains_hyperbolic);
        assert!(is_hyperbolic(d.witness.as_ref().unwrap()).unwrap().hyperbolic);
        // disc of x^2 + t xy + y^2 is t^2 - 4 up to a constant
        let disc = d.trace.discriminant.clone();
        assert_eq!(disc.degree(), Some(2));
        assert!(disc.eval(&int(2)).is_zero() && disc.eval(&int(-2)).is_zero());
    }

    #[test]
    fn pencil_with_common_quadratic_factor() {
        let q = f(&[1, 0, 1]);
        let a = &BinaryForm::x() * &q;
        let b = &BinaryForm::y() * &q;
        let d = pencil_contains_hyperbolic(&a, &b).unwrap();
        assert!(!d.contains_hyperbolic);
        // every sample has exactly one real root
        assert!(d.trace.samples.iter().all(|s| s.distinct_real_roots == 1));
    }

    #[test]
    fn pencil_immediate_and_errors() {
        let d = pencil_contains_hyperbolic(&f(&[-1, 0, 1]), &f(&[3, 1, 0])).unwrap();
        assert_eq!(d.trace.samples.len(), 1);
        assert_eq!(d.trace.samples[0].t, Some(Rat::zero()));
        assert_eq!(
            pencil_contains_hyperbolic(&f(&[1, 1]), &f(&[2, 2])).unwrap_err(),
            Error::DependentPencil
        );
    }

    #[test]
    fn cubic_pencil_never_hyperbolic() {
        let d = pencil_contains_hyperbolic(&f(&[0, 0, 0, 1]), &f(&[1, 0, 0, 0])).unwrap();
        assert!(!d.contains_hyperbolic);
    }

    #[test]
    fn grid_order() {
        let pts: Vec<(Rat, Rat)> = (0..8).map(grid_point).collect();
        assert_eq!(pts[0], (int(0), int(1)));
        assert_eq!(pts[1], (int(1), int(0)));
        assert_eq!(pts[2], (int(1), int(1)));
        assert_eq!(pts[3], (int(-1), int(1)));
        assert_eq!(pts[4], (ratio(1, 2), int(1)));
        assert_eq!(pts[6], (int(2), int(1)));
    }

    #[test]
    fn subsets_ordering() {
        let s = subsets_by_max(4, 2);
        assert_eq!(s[0], vec![0, 1]);
        assert_eq!(s.len(), 6);
        assert_eq!(s.last().unwrap(), &vec![2, 3]);
        assert_eq!(directions_of_height(2, 1).len(), 4);
    }

    #[test]
    fn subspace_search_examples() {
        let full = GradedPiece { degree: 2, basis: vec![f(&[1, 0, 0]), f(&[0, 0, 1]), f(&[0, 1, 0])] };
        let r = subspace_hyperbolic_search(&full, &SearchConfig::default()).unwrap();
        assert!(is_hyperbolic(r.found.as_ref().unwrap()).unwrap().hyperbolic);
        let one = GradedPiece { degree: 3, basis: vec![f(&[1, 0, 0, 1])] };
        assert!(subspace_hyperbolic_search(&one, &SearchConfig::default()).unwrap().found.is_none());
        let empty = GradedPiece { degree: 3, basis: vec![] };
        assert!(subspace_hyperbolic_search(&empty, &SearchConfig::default()).unwrap().found.is_none());
    }

    #[test]
    fn rank_of_xy() {
        let c = real_rank_search(&f(&[0, 1, 0])).unwrap();
        assert_eq!(c.rank, 2);
        assert_eq!(c.rigor, Rigor::Exact);
        assert_eq!(c.lower_bounds[0].payload, EvidencePayload::EmptyPiece);
    }

    #[test]
    fn rank_of_x2y2() {
        let c = real_rank_search(&f(&[0, 0, 1, 0, 0])).unwrap();
        assert_eq!(c.rank, 4);
        assert_eq!(c.rigor, Rigor::Exact);
        assert!(matches!(c.evidence_at(3).unwrap().payload, EvidencePayload::Pencil { .. }));
        assert!(c.witness.is_proportional(&f(&[0, -1, 0, 1, 0])));
    }

    #[test]
    fn rank_of_powers() {
        for d in 1..7 {
            let c = real_rank_search(&BinaryForm::linear(int(2), int(-1)).pow(d)).unwrap();
            assert_eq!(c.rank, 1);
            assert_eq!(c.rigor, Rigor::Exact);
        }
    }

    #[test]
    fn typicality_examples() {
        let t = typicality_certificate(&f(&[0, 1, 0])).unwrap();
        assert!(t.typical);
        assert_eq!(t.rigor, Rigor::Exact);
        let t = typicality_certificate(&f(&[0, 0, 1, 0, 0])).unwrap();
        assert!(t.typical && t.rank == 4 && t.rigor == Rigor::Exact);
        assert!(matches!(
            typicality_certificate(&f(&[0, 1, 0, 0, 0])),
            Err(Error::NonGenericDegrees(_))
        ));
    }

    #[test]
    fn zero_radius_is_identity() {
        let g = f(&[0, 0, 1, 0, 0]);
        let r = perturbation_stability_test(&g, &Rat::zero(), 4, 9).unwrap();
        assert!(r.samples.iter().all(|s| s.form == g && s.rank == 4));
        assert!(r.stable);
    }

    #[test]
    fn scaling_invariance() {
        let g = f(&[3, -1, 4, 1, -5, 9]);
        let a = real_rank_search(&g).unwrap();
        let b = real_rank_search(&g.scale(&ratio(-7, 3))).unwrap();
        assert_eq!(a.rank, b.rank);
        let la: Vec<Rigor> = a.lower_bounds.iter().map(|e| e.rigor).collect();
        let lb: Vec<Rigor> = b.lower_bounds.iter().map(|e| e.rigor).collect();
        assert_eq!(la, lb);
    }
    #[test]
    fn rational_witnesses() {
        let xy = BinaryForm::from_ints(&[0, 1, 0]);
        let s = rational_witness(&xy, 2, 100).unwrap().unwrap();
        assert!(s.is_proportional(&BinaryForm::from_ints(&[-1, 0, 1])));
        let g = BinaryForm::from_ints(&[0, 0, 1, 0, 0]);
        let s = rational_witness(&g, 4, 100).unwrap().unwrap();
        assert!(annihilates(&s, &g) && is_hyperbolic(&s).unwrap().hyperbolic);
        assert_eq!(rational_witness(&g, 3, 100).unwrap(), None);
    }
}
