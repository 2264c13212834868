//! Replay verification of certificates.
//!
//! Exact claims are re-checked with exact arithmetic from the recorded data.
//! Searches are not re-run, with one exception: EMPIRICAL evidence is
//! replayed from its recorded configuration, since its content is the search
//! log itself.

use num_traits::Zero;

use crate::apolarity::{apolar_generators, apolar_graded_piece, is_generic_degrees};
use crate::decompose::Decomposition;
use crate::poly::{annihilates, BinaryForm};
use crate::rank::{
    generic_degrees_proof, pencil_contains_hyperbolic, perturb, real_rank_search,
    subspace_hyperbolic_search, weakest, EvidencePayload, LowerBoundEvidence, PerturbationReport,
    RankCertificate, Rigor, TypicalityCertificate, Verdict,
};
use crate::roots::{is_hyperbolic, HyperbolicityCertificate};
use crate::witness::{admissible_range, base_plan, BaseKind, CertificateChain, HYPERBOLIC_RANK_FACT, HYPERBOLIC_RANK_STATEMENT};
use crate::{Error, Result};

fn fail<T>(check: &str, detail: impl Into<String>) -> Result<T> {
    Err(Error::Verification(format!("{check}: {}", detail.into())))
}

fn ensure(cond: bool, check: &str, detail: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        fail(check, detail())
    }
}

fn replay_hyperbolicity(cert: &HyperbolicityCertificate, subject: &BinaryForm, expect: bool) -> Result<()> {
    ensure(cert.subject == *subject, "hyperbolicity", || {
        format!("certificate subject {} is not {subject}", cert.subject)
    })?;
    cert.replay()
        .or_else(|_| fail("hyperbolicity", format!("certificate for {subject} does not replay")))?;
    ensure(cert.hyperbolic == expect, "hyperbolicity", || {
        format!("{subject} hyperbolic = {}, expected {expect}", cert.hyperbolic)
    })
}

/// Checks one lower-bound record against the form it is about.
pub fn verify_evidence(form: &BinaryForm, ev: &LowerBoundEvidence) -> Result<()> {
    let check = format!("evidence in degree {}", ev.degree);
    let check = check.as_str();
    ensure(ev.verdict == Verdict::NoHyperbolicForm, check, || "unexpected verdict".into())?;
    let dim = if ev.degree == 0 {
        0
    } else {
        apolar_graded_piece(form, ev.degree)?.dim()
    };
    ensure(dim == ev.dimension, check, || {
        format!("recorded dimension {} but the piece has dimension {dim}", ev.dimension)
    })?;
    if ev.rigor == Rigor::Exact && dim > 2 && !matches!(ev.payload, EvidencePayload::Inherited { .. }) {
        return fail(check, "EXACT evidence on a piece of dimension above 2");
    }
    match &ev.payload {
        EvidencePayload::EmptyPiece => {
            ensure(dim == 0 && ev.rigor == Rigor::Exact, check, || "piece is not empty".into())
        }
        EvidencePayload::SingleForm { certificate } => {
            ensure(dim == 1 && ev.rigor == Rigor::Exact, check, || "piece is not a line".into())?;
            let basis = apolar_graded_piece(form, ev.degree)?.basis;
            ensure(certificate.subject.is_proportional(&basis[0]), check, || {
                format!("{} does not span the piece", certificate.subject)
            })?;
            replay_hyperbolicity(certificate, &certificate.subject, false)
        }
        EvidencePayload::Pencil { trace } => {
            ensure(dim == 2 && ev.rigor == Rigor::Exact, check, || "piece is not a pencil".into())?;
            ensure(
                trace.a.degree() == ev.degree && annihilates(&trace.a, form) && annihilates(&trace.b, form),
                check,
                || "pencil basis is not in the apolar ideal".into(),
            )?;
            let fresh = pencil_contains_hyperbolic(&trace.a, &trace.b)
                .or_else(|e| fail(check, format!("pencil does not replay: {e}")))?;
            ensure(!fresh.contains_hyperbolic, check, || "pencil contains a hyperbolic form".into())?;
            ensure(fresh.trace == *trace, check, || "pencil trace does not replay".into())
        }
        EvidencePayload::Fact { fact, statement } => {
            ensure(ev.rigor == Rigor::TheoremBacked, check, || "fact with wrong rigor".into())?;
            ensure(
                fact == HYPERBOLIC_RANK_FACT && statement == HYPERBOLIC_RANK_STATEMENT,
                check,
                || format!("unknown fact {fact:?}"),
            )?;
            ensure(
                ev.degree < form.degree() && is_hyperbolic(form)?.hyperbolic,
                check,
                || format!("hypothesis of {fact} fails for {form}"),
            )
        }
        EvidencePayload::Search { report } => {
            ensure(ev.rigor == Rigor::Empirical, check, || "search with wrong rigor".into())?;
            ensure(report.found.is_none() && report.dimension == dim, check, || {
                "search report does not describe an unsuccessful search of this piece".into()
            })?;
            let piece = apolar_graded_piece(form, ev.degree)?;
            let fresh = subspace_hyperbolic_search(&piece, &report.config)?;
            ensure(fresh == *report, check, || "search log does not replay".into())
        }
        EvidencePayload::Inherited { ancestor, evidence } => {
            ensure(
                evidence.degree == ev.degree && evidence.rigor == ev.rigor && evidence.verdict == ev.verdict,
                check,
                || "inherited record does not match its source".into(),
            )?;
            let piece = apolar_graded_piece(form, ev.degree)?;
            if let Some(b) = piece.basis.iter().find(|b| !annihilates(b, ancestor)) {
                return fail(check, format!("containment fails: {b} does not annihilate {ancestor}"));
            }
            verify_evidence(ancestor, evidence)
        }
    }
}

pub fn verify_rank_certificate(cert: &RankCertificate) -> Result<()> {
    let f = &cert.form;
    ensure(!f.is_zero() && f.degree() >= 1, "rank certificate", || "form is zero or constant".into())?;
    let s = &cert.witness;
    ensure(s.degree() == cert.rank, "upper bound", || {
        format!("witness degree {} differs from rank {}", s.degree(), cert.rank)
    })?;
    ensure(annihilates(s, f), "membership", || format!("{s} does not annihilate {f}"))?;
    replay_hyperbolicity(&cert.witness_certificate, s, true)?;
    let pair = apolar_generators(f)?;
    ensure(pair.degrees() == cert.generator_degrees, "generator degrees", || {
        format!("recorded {:?}, recomputed {:?}", cert.generator_degrees, pair.degrees())
    })?;
    ensure(cert.rank >= pair.degrees().0, "rank certificate", || {
        "rank below the first generator degree".into()
    })?;
    let degrees: Vec<usize> = cert.lower_bounds.iter().map(|e| e.degree).collect();
    ensure(degrees == (1..cert.rank).collect::<Vec<_>>(), "lower bounds", || {
        format!("evidence degrees {degrees:?} do not cover 1..{}", cert.rank)
    })?;
    for ev in &cert.lower_bounds {
        verify_evidence(f, ev)?;
    }
    ensure(cert.rigor == weakest(&cert.lower_bounds), "rigor", || {
        format!("recorded {} but the weakest evidence is {}", cert.rigor, weakest(&cert.lower_bounds))
    })
}

pub fn verify_typicality(t: &TypicalityCertificate) -> Result<()> {
    let f = &t.form;
    let proof = generic_degrees_proof(f).or_else(|e| fail("generic degrees", e.to_string()))?;
    ensure(proof == t.generic_degrees, "generic degrees", || "catalecticant data does not replay".into())?;
    ensure(t.witness.degree() == t.rank && annihilates(&t.witness, f), "upper bound", || {
        format!("{} is not an apolar form of degree {}", t.witness, t.rank)
    })?;
    replay_hyperbolicity(&t.witness_certificate, &t.witness, true)?;
    ensure(t.below.degree + 1 == t.rank.max(1), "typicality", || {
        format!("evidence is in degree {}, not {}", t.below.degree, t.rank - 1)
    })?;
    verify_evidence(f, &t.below)?;
    ensure(t.typical == (t.below.verdict == Verdict::NoHyperbolicForm), "typicality", || {
        "verdict does not follow from the evidence".into()
    })?;
    ensure(t.rigor == t.below.rigor, "rigor", || "typicality rigor differs from its evidence".into())
}

pub fn verify_chain(c: &CertificateChain) -> Result<()> {
    let (lo, hi) = admissible_range(c.degree);
    ensure(lo <= c.rank && c.rank <= hi, "admissible pair", || {
        format!("{lo} <= {} <= {hi} fails", c.rank)
    })?;
    let s = &c.witness;
    ensure(s.degree() == c.rank, "chain witness", || format!("{s} does not have degree {}", c.rank))?;
    replay_hyperbolicity(&is_hyperbolic(s)?, s, true)?;
    ensure(annihilates(s, c.form()), "membership", || format!("{s} does not annihilate the chain's form"))?;

    let base = &c.base;
    let (kind, degree) = base_plan(c.degree, c.rank);
    ensure(base.kind == kind && base.degree() == degree, "base", || {
        format!("{:?} base of degree {} does not follow the base policy", base.kind, base.degree())
    })?;
    ensure(
        base.certificate.form == base.form && base.certificate.rank == c.rank && base.certificate.witness == *s,
        "base",
        || "base certificate does not match the chain".into(),
    )?;
    verify_rank_certificate(&base.certificate)?;
    if base.kind != BaseKind::MaxRank {
        ensure(base.rigor() == Rigor::Exact, "base", || "search base is not EXACT".into())?;
    }

    let mut current = &base.form;
    for (i, step) in c.steps.iter().enumerate() {
        ensure(step.input == *current, "chain link", || format!("step {i} does not start at the previous form"))?;
        step.check(s).map_err(|e| Error::Verification(format!("step {i}: {e}")))?;
        current = &step.output;
    }
    ensure(current.degree() == c.degree, "chain length", || {
        format!("chain ends in degree {}, not {}", current.degree(), c.degree)
    })?;
    ensure(is_generic_degrees(current)?, "generic degrees", || format!("{current} is not generic"))?;

    let cert = &c.certificate;
    verify_rank_certificate(cert)?;
    ensure(
        cert.form == *current && cert.rank == c.rank && cert.witness == *s,
        "final certificate",
        || "final certificate does not describe the chain's end".into(),
    )?;
    ensure(
        c.typicality.form == *current && c.typicality.rank == c.rank,
        "typicality",
        || "typicality certificate is about another form".into(),
    )?;
    verify_typicality(&c.typicality)
}

/// Re-derives every perturbed form from the seed and recomputes its rank.
pub fn verify_perturbation(r: &PerturbationReport) -> Result<()> {
    ensure(r.samples.len() == r.trials, "perturbation", || "sample count differs from trials".into())?;
    let mut histogram = std::collections::BTreeMap::new();
    for (i, sample) in r.samples.iter().enumerate() {
        ensure(sample.index == i, "perturbation", || format!("sample {i} is out of order"))?;
        let g = perturb(&r.form, &r.radius, r.seed, i);
        ensure(sample.form == g, "perturbation", || format!("sample {i} is not the seeded perturbation"))?;
        let cert = real_rank_search(&g)?;
        ensure(cert.rank == sample.rank && cert.rigor == sample.rigor, "perturbation", || {
            format!("sample {i} has rank {} ({}), recorded {}", cert.rank, cert.rigor, sample.rank)
        })?;
        *histogram.entry(sample.rank).or_insert(0usize) += 1;
    }
    ensure(histogram == r.histogram, "perturbation", || "histogram does not match the samples".into())?;
    ensure(r.stable == (histogram.len() <= 1), "perturbation", || "stability flag is wrong".into())
}

/// Re-sums a decomposition and recomputes its residual exactly.
pub fn verify_decomposition(f: &BinaryForm, witness: &BinaryForm, dec: &Decomposition) -> Result<()> {
    ensure(dec.degree == f.degree(), "decomposition", || "degree mismatch".into())?;
    ensure(annihilates(witness, f), "decomposition", || format!("{witness} does not annihilate {f}"))?;
    replay_hyperbolicity(&is_hyperbolic(witness)?, witness, true)?;
    ensure(dec.terms.len() <= witness.degree(), "decomposition", || "more terms than witness roots".into())?;
    ensure(dec.exact || dec.precision_bits.is_some(), "decomposition", || "numeric without a precision".into())?;
    for t in &dec.terms {
        ensure(!(t.a.is_zero() && t.b.is_zero()), "decomposition", || "zero linear form".into())?;
        let on_root = if dec.exact || t.b.is_zero() {
            witness.eval(&t.a, &t.b).is_zero()
        } else {
            // refined midpoints lie within 2^-(bits + 16) of a simple root
            let bits = dec.precision_bits.unwrap_or(0) as i64;
            let r = &t.a / &t.b;
            let delta = crate::rat::pow2(-(bits + 16));
            let one = crate::Rat::from_integer(1.into());
            let lo = witness.eval(&(&r - &delta), &one);
            let hi = witness.eval(&(&r + &delta), &one);
            lo.is_zero() || hi.is_zero() || (lo < crate::Rat::zero()) != (hi < crate::Rat::zero())
        };
        ensure(on_root, "decomposition", || {
            format!("[{} : {}] is not at a root of the witness", t.a, t.b)
        })?;
    }
    let resum = dec.resum();
    let residual = f
        .coeffs()
        .iter()
        .zip(resum.coeffs())
        .map(|(a, b)| num_traits::Signed::abs(&(a - b)))
        .max()
        .unwrap_or_else(crate::Rat::zero);
    ensure(residual == dec.residual, "decomposition", || {
        format!("recorded residual differs from the recomputed {residual}")
    })?;
    if dec.exact {
        ensure(residual.is_zero(), "decomposition", || "exact decomposition with a residual".into())?;
    } else if let Some(bits) = dec.precision_bits {
        ensure(residual < crate::rat::pow2(-(bits as i64)), "decomposition", || {
            format!("residual is not below 2^-{bits}")
        })?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rank::real_rank_search;
    use crate::witness::witness;

    #[test]
    fn rank_certificates_replay() {
        for c in [&[0, 1, 0][..], &[0, 0, 1, 0, 0], &[3, -1, 4, 1, -5, 9, 2]] {
            let cert = real_rank_search(&BinaryForm::from_ints(c)).unwrap();
            verify_rank_certificate(&cert).unwrap();
        }
    }

    #[test]
    fn chains_replay() {
        for (d, m) in [(2, 2), (3, 2), (5, 4), (6, 4), (7, 6)] {
            let c = witness(d, m, 3).unwrap();
            verify_chain(&c).unwrap();
        }
    }

    #[test]
    fn altered_witness_is_caught() {
        let mut cert = real_rank_search(&BinaryForm::from_ints(&[0, 0, 1, 0, 0])).unwrap();
        let mut c = cert.witness.clone().into_coeffs();
        c[0] += crate::rat::int(1);
        cert.witness = BinaryForm::new(c);
        assert!(matches!(verify_rank_certificate(&cert), Err(Error::Verification(_))));
    }

    #[test]
    fn numeric_terms_follow_the_witness() {
        let f = BinaryForm::from_ints(&[0, 1, 0]);
        let s = BinaryForm::from_ints(&[-1, 0, 2]);
        let dec = crate::decompose::decompose(&s, &f, 64).unwrap();
        assert!(!dec.exact);
        verify_decomposition(&f, &s, &dec).unwrap();
        // also kills x y and is hyperbolic, but has other roots
        let other = BinaryForm::from_ints(&[-1, 0, 3]);
        assert!(verify_decomposition(&f, &other, &dec).is_err());
    }
}
