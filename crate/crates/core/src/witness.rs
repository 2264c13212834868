//! Forms of prescribed typical real rank, built by induction on the degree.
//!
//! A chain starts from a base form of rank `m` and raises the degree one step
//! at a time. Each step replaces the apolar ideal `⟨p1, p2⟩` of the current
//! form by a smaller complete intersection that still contains the same
//! hyperbolic form `s` of degree `m`, and whose generator degrees are the
//! generic ones for the next degree. Containment of ideals carries every
//! lower-bound statement forward, so the rank stays `m`.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::apolarity::{
    apolar_generators, apolar_graded_piece, form_from_apolar, generic_degree_pair, is_generic_degrees,
    syzygy_representation, Syzygy,
};
use crate::poly::{annihilates, BinaryForm};
use crate::rank::{
    certify_with_witness, examine_piece, typicality_from, weakest, EvidencePayload, LargePieces,
    LowerBoundEvidence, PieceOutcome, RankCertificate, Rigor, SearchConfig, TypicalityCertificate,
};
use crate::rat::{int, ratio, serde_opt_rat, serde_rat, Rat};
use crate::rng::SeededRng;
use crate::roots::{is_hyperbolic, rational_roots_of, resultant};
use crate::{Error, Result};

/// Hard cap on rational points tried by one induction step.
pub const POINT_BUDGET: usize = 10_000;
/// Attempts of the seeded base search before giving up.
pub const BASE_ATTEMPTS: usize = 2_000;

pub const HYPERBOLIC_RANK_FACT: &str = "hyperbolic-real-rank";
pub const HYPERBOLIC_RANK_STATEMENT: &str =
    "a real binary form of degree m with m distinct real roots has real rank m";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Point {
    #[serde(with = "serde_rat")]
    pub a: Rat,
    #[serde(with = "serde_rat")]
    pub b: Rat,
}

impl Point {
    pub fn new(a: Rat, b: Rat) -> Self {
        Point { a, b }
    }

    /// The primitive linear form vanishing at `[a : b]`.
    pub fn vanishing_form(&self) -> BinaryForm {
        BinaryForm::vanishing_at(&self.a, &self.b).primitive()
    }
}

/// Primitive projective points `(1,0), (0,1), (1,1), (1,-1), (2,1), (1,2),
/// (2,-1), (1,-2), ...` by increasing height.
pub fn farey_points() -> impl Iterator<Item = Point> {
    let first = [(1, 0), (0, 1), (1, 1), (1, -1)];
    let rest = (2i64..).flat_map(|h| {
        (1..h)
            .filter(move |j| num_integer::Integer::gcd(&h, j) == 1)
            .flat_map(move |j| [(h, j), (j, h), (h, -j), (j, -h)])
    });
    first
        .into_iter()
        .chain(rest)
        .map(|(a, b)| Point::new(int(a), int(b)))
}

// ---------------------------------------------------------------------------
// bases

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseKind {
    /// Degree `2m - 2`: nothing below degree `m` in the apolar ideal.
    MinimalRank,
    /// Degree `max(m, 2m - 4)`: lower pieces of dimension at most 2.
    ExactSearch,
    /// A product of `m` distinct real linear forms.
    MaxRank,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseRecord {
    pub kind: BaseKind,
    pub form: BinaryForm,
    pub seed: u64,
    /// Index of the successful attempt of the seeded search.
    pub attempt: usize,
    pub certificate: RankCertificate,
}

impl BaseRecord {
    pub fn degree(&self) -> usize {
        self.form.degree()
    }

    pub fn rigor(&self) -> Rigor {
        self.certificate.rigor
    }
}

/// Degree of the base used for rank `m` below target degree `d`, and its kind.
pub fn base_plan(d: usize, m: usize) -> (BaseKind, usize) {
    let minimal = 2 * m - 2;
    let exact = m.max((2 * m).saturating_sub(4)).max(2);
    if minimal >= m && d >= minimal {
        (BaseKind::MinimalRank, minimal.max(2))
    } else if d >= exact {
        (BaseKind::ExactSearch, exact)
    } else {
        (BaseKind::MaxRank, m)
    }
}

/// Searches seeded forms `sum_i c_i (t_i x + y)^d0` of real rank exactly `m`
/// whose certificate is EXACT throughout.
pub fn exact_base(m: usize, d0: usize, seed: u64) -> Result<BaseRecord> {
    if m < 2 || d0 < m || d0 > 2 * m - 1 {
        return Err(Error::DegreeOutOfRange(format!(
            "no exact base of degree {d0} for rank {m}"
        )));
    }
    let kind = if d0 == 2 * m - 2 {
        BaseKind::MinimalRank
    } else {
        BaseKind::ExactSearch
    };
    let spread = 2 * m as i64 + 2;
    for attempt in 0..BASE_ATTEMPTS {
        let mut rng = SeededRng::split(seed, ((d0 as u64) << 32) ^ ((m as u64) << 48) ^ attempt as u64);
        let mut roots: Vec<Rat> = Vec::new();
        while roots.len() < m {
            let t = ratio(rng.int(-spread, spread), rng.int(1, 2));
            if !roots.contains(&t) {
                roots.push(t);
            }
        }
        let f = roots
            .iter()
            .fold(BinaryForm::zero(d0), |acc, t| {
                let c = int(rng.nonzero_int(4));
                &acc + &BinaryForm::linear(t.clone(), Rat::one()).pow(d0).scale(&c)
            })
            .primitive();
        if f.is_zero() || !is_generic_degrees(&f)? {
            continue;
        }
        let s = BinaryForm::from_roots(&roots).primitive();
        let cert = certify_with_witness(&f, &s, LargePieces::Search(&SearchConfig::default()))?;
        if let Some(cert) = cert.filter(|c| c.rigor == Rigor::Exact) {
            return Ok(BaseRecord {
                kind,
                form: f,
                seed,
                attempt,
                certificate: cert,
            });
        }
    }
    Err(Error::BudgetExhausted(format!(
        "no exact base of degree {d0} and rank {m} in {BASE_ATTEMPTS} attempts"
    )))
}

/// A degree-`2m - 2` form of rank `m` whose lower pieces are empty.
pub fn minimal_rank_base(m: usize, seed: u64) -> Result<BaseRecord> {
    if m < 2 {
        return Err(Error::DegreeOutOfRange("rank must be at least 2".into()));
    }
    exact_base(m, 2 * m - 2, seed)
}

/// `prod_i (x - t_i y)` with `t_i = i`, shifted to `i + i^2 / k` for
/// `k = 1, 2, ...` until the apolar ideal has generic degrees.
pub fn max_rank_base(m: usize) -> Result<BaseRecord> {
    if m < 2 {
        return Err(Error::DegreeOutOfRange("rank must be at least 2".into()));
    }
    let mut attempt = 0;
    let f = loop {
        let roots: Vec<Rat> = (0..m as i64)
            .map(|i| {
                if attempt == 0 {
                    int(i)
                } else {
                    int(i) + ratio(i * i, attempt as i64)
                }
            })
            .collect();
        let f = BinaryForm::from_roots(&roots);
        if is_generic_degrees(&f)? {
            break f;
        }
        attempt += 1;
        if attempt > BASE_ATTEMPTS {
            return Err(Error::BudgetExhausted(format!("no generic hyperbolic base of degree {m}")));
        }
    };
    let piece = apolar_graded_piece(&f, m)?;
    let s = match examine_piece(&piece, &SearchConfig::default())? {
        PieceOutcome::Witness(s) => s,
        PieceOutcome::Absent(_) => {
            return Err(Error::BudgetExhausted(format!(
                "no hyperbolic form found in degree {m} of the apolar ideal of {f}"
            )))
        }
    };
    let cert = certify_with_witness(
        &f,
        &s,
        LargePieces::Fact {
            fact: HYPERBOLIC_RANK_FACT,
            statement: HYPERBOLIC_RANK_STATEMENT,
        },
    )?
    .ok_or_else(|| Error::Internal(format!("hyperbolic {f} has a lower-degree witness")))?;
    Ok(BaseRecord {
        kind: BaseKind::MaxRank,
        form: f,
        seed: 0,
        attempt,
        certificate: cert,
    })
}

pub fn base_for(d: usize, m: usize, seed: u64) -> Result<BaseRecord> {
    match base_plan(d, m) {
        (BaseKind::MaxRank, _) => max_rank_base(m),
        (_, d0) => exact_base(m, d0, seed),
    }
}

// ---------------------------------------------------------------------------
// induction steps

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StepKind {
    EvenMinimal,
    EvenGeneral,
    Odd,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessStep {
    pub kind: StepKind,
    pub input: BinaryForm,
    /// Generators of the input's apolar ideal, in the basis used by the step.
    pub p1: BinaryForm,
    pub p2: BinaryForm,
    /// `s = p1 q1 + p2 q2`.
    pub multipliers: Syzygy,
    pub point: Point,
    /// Even steps: `p1' = p1 - alpha p2`.
    #[serde(with = "serde_opt_rat")]
    pub alpha: Option<Rat>,
    /// The linear form vanishing at `point`.
    pub ell: BinaryForm,
    /// Odd steps: `p2' = p2 + ell_hat p1`.
    pub ell_hat: Option<BinaryForm>,
    /// Output generators `h1, h2` with `s = h1 c1 + h2 c2`.
    pub h1: BinaryForm,
    pub h2: BinaryForm,
    pub cofactors: Syzygy,
    #[serde(with = "serde_rat")]
    pub resultant: Rat,
    pub output: BinaryForm,
}

fn fail<T>(check: &str, detail: String) -> Result<T> {
    Err(Error::Verification(format!("{check}: {detail}")))
}

fn multiplier(q: &Option<BinaryForm>, degree: Option<usize>) -> BinaryForm {
    q.clone()
        .unwrap_or_else(|| BinaryForm::zero(degree.unwrap_or(0)))
}

impl WitnessStep {
    /// Exact re-check of every claim of the step.
    pub fn check(&self, s: &BinaryForm) -> Result<()> {
        let d = self.input.degree();
        let k = d / 2;
        let (p1, p2) = (&self.p1, &self.p2);
        if !annihilates(p1, &self.input) || !annihilates(p2, &self.input) {
            return fail("input generators", format!("{p1}, {p2} do not both annihilate {}", self.input));
        }
        if p1.degree() + p2.degree() != d + 2 || resultant(p1, p2)?.is_zero() {
            return fail("input generators", "not a complete intersection of degree sum d + 2".into());
        }
        if self.multipliers.recombine(p1, p2, s.degree()) != *s {
            return fail("input membership", format!("{s} != p1 q1 + p2 q2"));
        }
        let ell = &self.ell;
        if ell.degree() != 1 || !ell.eval(&self.point.a, &self.point.b).is_zero() {
            return fail("linear factor", format!("{ell} does not vanish at the chosen point"));
        }
        let (expected_h1, expected_h2, expected_degrees) = match self.kind {
            StepKind::EvenMinimal | StepKind::EvenGeneral => {
                if !d.is_multiple_of(2) {
                    return fail("step parity", format!("even step on degree {d}"));
                }
                let p1_adj = match (&self.alpha, self.kind) {
                    (None, StepKind::EvenMinimal) => {
                        if !p1.is_proportional(s) {
                            return fail("minimal step", "p1 is not the hyperbolic form".into());
                        }
                        p1.clone()
                    }
                    (Some(alpha), StepKind::EvenGeneral) => p1 - &p2.scale(alpha),
                    _ => return fail("step data", "adjustment does not match the case".into()),
                };
                (p1_adj, ell * p2, (k + 1, k + 2))
            }
            StepKind::Odd => {
                if d % 2 != 1 {
                    return fail("step parity", format!("odd step on degree {d}"));
                }
                if self.alpha.is_some() {
                    return fail("step data", "odd step carries alpha".into());
                }
                let p2_adj = match &self.ell_hat {
                    Some(h) if h.degree() == 1 => p2 + &(h * p1),
                    Some(h) => return fail("step data", format!("adjuster {h} is not linear")),
                    None => p2.clone(),
                };
                (ell * p1, p2_adj, (k + 2, k + 2))
            }
        };
        if self.h1 != expected_h1 || self.h2 != expected_h2 {
            return fail("output generators", "do not match the step's construction".into());
        }
        if (self.h1.degree(), self.h2.degree()) != expected_degrees
            || expected_degrees != generic_degree_pair(d + 1)
        {
            return fail(
                "generic degrees",
                format!("output degrees {:?}", (self.h1.degree(), self.h2.degree())),
            );
        }
        let res = resultant(&self.h1, &self.h2)?;
        if res.is_zero() || res != self.resultant {
            return fail("output resultant", format!("recomputed {res}"));
        }
        if self.cofactors.recombine(&self.h1, &self.h2, s.degree()) != *s {
            return fail("output membership", format!("{s} != h1 c1 + h2 c2"));
        }
        if !annihilates(&self.h1, &self.input) || !annihilates(&self.h2, &self.input) {
            return fail("containment", "output generators leave the input's apolar ideal".into());
        }
        if self.output.is_zero() || self.output.degree() != d + 1 {
            return fail("output form", format!("{} has the wrong degree", self.output));
        }
        if !annihilates(&self.h1, &self.output) || !annihilates(&self.h2, &self.output) {
            return fail("output annihilation", format!("generators do not annihilate {}", self.output));
        }
        if !annihilates(s, &self.output) {
            return fail("witness apolarity", format!("{s} does not annihilate {}", self.output));
        }
        Ok(())
    }
}

struct StepInput {
    f: BinaryForm,
    p1: BinaryForm,
    p2: BinaryForm,
}

fn step_input(f: &BinaryForm) -> Result<StepInput> {
    let pair = apolar_generators(f)?;
    if !pair.generic_degrees {
        return Err(Error::NonGenericDegrees(format!("{f} has generator degrees {:?}", pair.degrees())));
    }
    Ok(StepInput {
        f: f.clone(),
        p1: pair.g1,
        p2: pair.g2,
    })
}

#[allow(clippy::too_many_arguments)]
fn finish_step(
    kind: StepKind,
    input: &StepInput,
    p1: BinaryForm,
    p2: BinaryForm,
    multipliers: Syzygy,
    point: Point,
    alpha: Option<Rat>,
    ell_hat: Option<BinaryForm>,
    h1: BinaryForm,
    h2: BinaryForm,
    s: &BinaryForm,
) -> Result<WitnessStep> {
    let resultant = resultant(&h1, &h2)?;
    if resultant.is_zero() {
        return Err(Error::Internal(format!("output generators {h1}, {h2} share a root")));
    }
    let cofactors = syzygy_representation(s, &h1, &h2)?;
    let output = form_from_apolar(&h1, &h2)?.primitive();
    let step = WitnessStep {
        kind,
        input: input.f.clone(),
        p1,
        p2,
        multipliers,
        ell: point.vanishing_form(),
        point,
        alpha,
        ell_hat,
        h1,
        h2,
        cofactors,
        resultant,
        output,
    };
    step.check(s)
        .map_err(|e| Error::Internal(format!("step from {} failed its own check: {e}", input.f)))?;
    Ok(step)
}

/// Candidate parameters `0, 1, -1, 2, -2, ...` for `ell = x - c y`.
pub fn default_shifts() -> impl Iterator<Item = Rat> {
    std::iter::once(Rat::zero()).chain((1i64..).flat_map(|n| [int(n), int(-n)]))
}

/// Even degree `2k`, rank `k + 1`: `s` is itself a generator.
pub fn induct_even_minimal(f: &BinaryForm, s: &BinaryForm) -> Result<WitnessStep> {
    induct_even_minimal_with(f, s, default_shifts())
}

pub fn induct_even_minimal_with(
    f: &BinaryForm,
    s: &BinaryForm,
    shifts: impl Iterator<Item = Rat>,
) -> Result<WitnessStep> {
    let d = f.degree();
    if !d.is_multiple_of(2) || s.degree() != d / 2 + 1 || !annihilates(s, f) {
        return Err(Error::DegreeOutOfRange(format!(
            "minimal even step needs even degree and an apolar witness of degree {}",
            d / 2 + 1
        )));
    }
    let input = step_input(f)?;
    let p1 = s.primitive();
    let p2 = if input.p1.is_proportional(&p1) {
        input.p2.clone()
    } else {
        input.p1.clone()
    };
    let multipliers = syzygy_representation(s, &p1, &p2)?;
    for c in shifts.take(POINT_BUDGET) {
        let point = Point::new(c, Rat::one());
        if p1.eval(&point.a, &point.b).is_zero() {
            continue;
        }
        let h2 = &point.vanishing_form() * &p2;
        if resultant(&p1, &h2)?.is_zero() {
            continue;
        }
        return finish_step(
            StepKind::EvenMinimal,
            &input,
            p1.clone(),
            p2.clone(),
            multipliers,
            point,
            None,
            None,
            p1.clone(),
            h2,
            s,
        );
    }
    Err(Error::BudgetExhausted(format!("no admissible shift for {p1}")))
}

/// Even degree `2k`, rank above `k + 1`.
pub fn induct_even_general(f: &BinaryForm, s: &BinaryForm) -> Result<WitnessStep> {
    let d = f.degree();
    if !d.is_multiple_of(2) || s.degree() <= d / 2 + 1 || !annihilates(s, f) {
        return Err(Error::DegreeOutOfRange(format!(
            "general even step needs even degree and an apolar witness above degree {}",
            d / 2 + 1
        )));
    }
    let input = step_input(f)?;
    let (mut p1, mut p2) = (input.p1.clone(), input.p2.clone());
    let mut syz = syzygy_representation(s, &p1, &p2)?;
    let qdeg = s.degree() - p1.degree();
    if multiplier(&syz.q1, Some(qdeg)).is_zero() {
        std::mem::swap(&mut p1, &mut p2);
        syz = syzygy_representation(s, &p1, &p2)?;
    }
    let q1 = multiplier(&syz.q1, Some(qdeg));
    let q2 = multiplier(&syz.q2, Some(qdeg));

    let build = |point: Point, alpha: Rat| -> Result<Option<WitnessStep>> {
        let p1_adj = &p1 - &p2.scale(&alpha);
        if p1_adj.eval(&point.a, &point.b).is_zero() {
            return Ok(None);
        }
        let h2 = &point.vanishing_form() * &p2;
        finish_step(
            StepKind::EvenGeneral,
            &input,
            p1.clone(),
            p2.clone(),
            syz.clone(),
            point,
            Some(alpha),
            None,
            p1_adj,
            h2,
            s,
        )
        .map(Some)
    };

    if !q2.is_zero() {
        for (a, b) in rational_roots_of(&q2) {
            if let Some(step) = build(Point::new(a, b), Rat::zero())? {
                return Ok(step);
            }
        }
    }
    for point in farey_points().take(POINT_BUDGET) {
        let v1 = q1.eval(&point.a, &point.b);
        if v1.is_zero() {
            continue;
        }
        let alpha = -q2.eval(&point.a, &point.b) / v1;
        if let Some(step) = build(point, alpha)? {
            return Ok(step);
        }
    }
    Err(Error::Internal(format!(
        "no admissible point for s = {s} with p1 = {p1}, p2 = {p2}, q1 = {q1}, q2 = {q2}"
    )))
}

/// Odd degree `2k + 1`, rank at least `k + 2`.
pub fn induct_odd(f: &BinaryForm, s: &BinaryForm) -> Result<WitnessStep> {
    let d = f.degree();
    if d % 2 != 1 || s.degree() < d / 2 + 2 || !annihilates(s, f) {
        return Err(Error::DegreeOutOfRange(format!(
            "odd step needs odd degree and an apolar witness of degree at least {}",
            d / 2 + 2
        )));
    }
    let input = step_input(f)?;
    let (p1, p2) = (input.p1.clone(), input.p2.clone());
    let syz = syzygy_representation(s, &p1, &p2)?;
    let q1 = multiplier(&syz.q1, s.degree().checked_sub(p1.degree()));
    let q2 = multiplier(&syz.q2, s.degree().checked_sub(p2.degree()));

    let build = |point: Point, ell_hat: Option<BinaryForm>| -> Result<Option<WitnessStep>> {
        let p2_adj = match &ell_hat {
            Some(h) => &p2 + &(h * &p1),
            None => p2.clone(),
        };
        if p2_adj.eval(&point.a, &point.b).is_zero() {
            return Ok(None);
        }
        let h1 = &point.vanishing_form() * &p1;
        finish_step(
            StepKind::Odd,
            &input,
            p1.clone(),
            p2.clone(),
            syz.clone(),
            point,
            None,
            ell_hat,
            h1,
            p2_adj,
            s,
        )
        .map(Some)
    };

    if !q1.is_zero() {
        for (a, b) in rational_roots_of(&q1) {
            if let Some(step) = build(Point::new(a, b), None)? {
                return Ok(step);
            }
        }
    }
    if !q2.is_zero() {
        for point in farey_points().take(POINT_BUDGET) {
            let v2 = q2.eval(&point.a, &point.b);
            if v2.is_zero() {
                continue;
            }
            let c = q1.eval(&point.a, &point.b) / v2;
            let ell_hat = if !point.a.is_zero() {
                BinaryForm::x().scale(&(&c / &point.a))
            } else {
                BinaryForm::y().scale(&(&c / &point.b))
            };
            let ell_hat = (!ell_hat.is_zero()).then_some(ell_hat);
            if let Some(step) = build(point, ell_hat)? {
                return Ok(step);
            }
        }
    }
    Err(Error::Internal(format!(
        "no admissible point for s = {s} with p1 = {p1}, p2 = {p2}, q1 = {q1}, q2 = {q2}"
    )))
}

/// The step appropriate for the parity of `f` and the degree of `s`.
pub fn induct(f: &BinaryForm, s: &BinaryForm) -> Result<WitnessStep> {
    let d = f.degree();
    if d % 2 == 1 {
        induct_odd(f, s)
    } else if s.degree() == d / 2 + 1 {
        induct_even_minimal(f, s)
    } else {
        induct_even_general(f, s)
    }
}

// ---------------------------------------------------------------------------
// chains

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateChain {
    pub degree: usize,
    pub rank: usize,
    pub seed: u64,
    /// The hyperbolic form carried through every step.
    pub witness: BinaryForm,
    pub base: BaseRecord,
    pub steps: Vec<WitnessStep>,
    pub certificate: RankCertificate,
    pub typicality: TypicalityCertificate,
}

impl CertificateChain {
    pub fn form(&self) -> &BinaryForm {
        &self.certificate.form
    }

    pub fn rigor(&self) -> Rigor {
        self.certificate.rigor
    }
}

/// Rank certificate for a chain's end form. Pieces of dimension at most 2
/// are decided directly; larger ones inherit the base's evidence through the
/// checked containment of apolar ideals.
pub fn inherited_certificate(g: &BinaryForm, s: &BinaryForm, base: &BaseRecord) -> Result<RankCertificate> {
    let witness_certificate = is_hyperbolic(s)?;
    let pair = apolar_generators(g)?;
    let mut lower_bounds: Vec<LowerBoundEvidence> = Vec::new();
    for e in 1..s.degree() {
        let piece = apolar_graded_piece(g, e)?;
        if piece.dim() <= 2 {
            match examine_piece(&piece, &SearchConfig::default())? {
                PieceOutcome::Absent(ev) => lower_bounds.push(ev),
                PieceOutcome::Witness(w) => {
                    return Err(Error::Internal(format!(
                        "degree {e} of the apolar ideal of {g} contains the hyperbolic {w}"
                    )))
                }
            }
            continue;
        }
        if let Some(b) = piece.basis.iter().find(|b| !annihilates(b, &base.form)) {
            return Err(Error::Internal(format!("{b} is not apolar to the base form")));
        }
        let ancestor = base
            .certificate
            .evidence_at(e)
            .ok_or_else(|| Error::Internal(format!("base has no evidence in degree {e}")))?;
        lower_bounds.push(LowerBoundEvidence {
            degree: e,
            dimension: piece.dim(),
            verdict: ancestor.verdict,
            rigor: ancestor.rigor,
            payload: EvidencePayload::Inherited {
                ancestor: base.form.clone(),
                evidence: Box::new(ancestor.clone()),
            },
        });
    }
    Ok(RankCertificate {
        form: g.clone(),
        rank: s.degree(),
        generator_degrees: pair.degrees(),
        witness: s.clone(),
        witness_certificate,
        rigor: weakest(&lower_bounds),
        lower_bounds,
    })
}

pub fn admissible_range(d: usize) -> (usize, usize) {
    ((d + 2) / 2, d)
}

/// A form of degree `d` and typical real rank `m` with its certificate chain.
pub fn witness(d: usize, m: usize, seed: u64) -> Result<CertificateChain> {
    let (lo, hi) = admissible_range(d);
    if d < 2 || m < lo || m > hi {
        return Err(Error::InadmissibleRank { d, m, lo });
    }
    let base = base_for(d, m, seed)?;
    let s = base.certificate.witness.clone();
    let mut f = base.form.clone();
    let mut steps = Vec::new();
    while f.degree() < d {
        let step = induct(&f, &s)?;
        f = step.output.clone();
        steps.push(step);
    }
    let certificate = if steps.is_empty() {
        base.certificate.clone()
    } else {
        inherited_certificate(&f, &s, &base)?
    };
    let typicality = typicality_from(&certificate)?;
    Ok(CertificateChain {
        degree: d,
        rank: m,
        seed,
        witness: s,
        base,
        steps,
        certificate,
        typicality,
    })
}

/// Every admissible `(d, m)` with `2 <= d <= d_max`, in increasing order.
pub fn admissible_pairs(d_max: usize) -> Vec<(usize, usize)> {
    (2..=d_max)
        .flat_map(|d| {
            let (lo, hi) = admissible_range(d);
            (lo..=hi).map(move |m| (d, m))
        })
        .collect()
}

pub fn atlas(d_max: usize, seed: u64) -> Result<Vec<CertificateChain>> {
    admissible_pairs(d_max)
        .into_par_iter()
        .map(|(d, m)| witness(d, m, seed))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rank::real_rank_search;

    fn f(c: &[i64]) -> BinaryForm {
        BinaryForm::from_ints(c)
    }

    #[test]
    fn farey_order() {
        let pts: Vec<(Rat, Rat)> = farey_points().take(8).map(|p| (p.a, p.b)).collect();
        let expect = [(1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (1, 2), (2, -1), (1, -2)];
        for (p, e) in pts.iter().zip(expect) {
            assert_eq!(p, &(int(e.0), int(e.1)));
        }
    }

    #[test]
    fn plans() {
        assert_eq!(base_plan(2, 2), (BaseKind::MinimalRank, 2));
        assert_eq!(base_plan(3, 3), (BaseKind::ExactSearch, 3));
        assert_eq!(base_plan(4, 3), (BaseKind::MinimalRank, 4));
        assert_eq!(base_plan(7, 4), (BaseKind::MinimalRank, 6));
        assert_eq!(base_plan(6, 5), (BaseKind::ExactSearch, 6));
        assert_eq!(base_plan(5, 5), (BaseKind::MaxRank, 5));
        assert_eq!(admissible_pairs(2), vec![(2, 2)]);
        assert_eq!(
            admissible_pairs(5),
            vec![(2, 2), (3, 2), (3, 3), (4, 3), (4, 4), (5, 3), (5, 4), (5, 5)]
        );
        let count: usize = (2..=10).map(|d| d - (d + 2) / 2 + 1).sum();
        assert_eq!(admissible_pairs(10).len(), count);
    }

    #[test]
    fn max_rank_bases() {
        let b = max_rank_base(3).unwrap();
        assert_eq!(b.form, f(&[0, 2, -3, 1]).primitive());
        assert_eq!(b.certificate.rank, 3);
        assert_eq!(b.rigor(), Rigor::Exact);
        let b = max_rank_base(5).unwrap();
        assert_eq!(b.certificate.rank, 5);
        assert_eq!(b.rigor(), Rigor::TheoremBacked);
    }

    #[test]
    fn minimal_bases() {
        for m in 2..=4 {
            let b = minimal_rank_base(m, 7).unwrap();
            assert_eq!(b.degree(), 2 * m - 2);
            assert_eq!(b.certificate.rank, m);
            assert_eq!(b.rigor(), Rigor::Exact);
        }
    }

    #[test]
    fn even_minimal_from_xy() {
        let xy = f(&[0, 1, 0]);
        let s = f(&[-1, 0, 1]);
        let step = induct_even_minimal(&xy, &s).unwrap();
        assert_eq!(step.output.degree(), 3);
        let c = real_rank_search(&step.output).unwrap();
        assert_eq!(c.rank, 2);
        assert_eq!(c.rigor, Rigor::Exact);
    }

    #[test]
    fn even_minimal_skips_colliding_shift() {
        let xy = f(&[0, 1, 0]);
        let s = f(&[-1, 0, 1]);
        // 1 is a root of x^2 - y^2 and must be skipped
        let step = induct_even_minimal_with(&xy, &s, [int(1), int(-1), int(3)].into_iter()).unwrap();
        assert_eq!(step.point.a, int(3));
    }

    #[test]
    fn odd_step_five_four() {
        let chain = witness(5, 4, 1).unwrap();
        assert_eq!(chain.certificate.generator_degrees, (3, 4));
        assert_eq!(chain.certificate.rank, 4);
        assert!(chain.typicality.typical);
    }

    #[test]
    fn chains_are_deterministic() {
        let a = witness(6, 4, 11).unwrap();
        let b = witness(6, 4, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn inadmissible() {
        assert_eq!(
            witness(6, 2, 0).unwrap_err(),
            Error::InadmissibleRank { d: 6, m: 2, lo: 4 }
        );
        assert!(witness(6, 7, 0).is_err());
    }
}
