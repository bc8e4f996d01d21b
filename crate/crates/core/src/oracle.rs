//! Brute-force residue coverage, independent of the deciders.
//!
//! `R(Q)` is dense in `Q_p` exactly when its integral part is dense in `Z_p`,
//! so a dense form must eventually hit every residue mod `p^r` with a quotient
//! `Q(u)/Q(v)` of non-negative valuation. Enumeration gives a finite view of
//! that: a bounded search that can refute a "dense" verdict, and that can
//! never contradict a correct "not dense" one inside the excluded ball.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::decider::{self, Verdict};
use crate::error::{Error, Result};
use crate::forms::QuadraticForm;
use crate::lattice::{self, Evaluator, Residues, Signature};
use crate::padic::{self, Prime};
use crate::witness::{self, ExclusionCertificate};

/// Largest modulus `p^r` the oracle tracks residue by residue.
pub const MAX_MODULUS: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageReport {
    pub prime: Prime,
    pub r: u32,
    pub bound: u64,
    /// Residues mod `p^r` hit by some integral quotient, ascending.
    pub covered: Vec<u64>,
    /// The complement of `covered`, ascending.
    pub missing: Vec<u64>,
    /// Number of (numerator, denominator) value classes combined.
    pub quotients_sampled: u64,
}

impl CoverageReport {
    pub fn modulus(&self) -> u64 {
        self.prime.get().pow(self.r)
    }

    pub fn covered_count(&self) -> u64 {
        self.covered.len() as u64
    }

    pub fn is_full(&self) -> bool {
        self.missing.is_empty()
    }

    pub fn is_covered(&self, residue: u64) -> bool {
        self.covered.binary_search(&residue).is_ok()
    }
}

struct Tally {
    residues: Residues,
    hit: Vec<bool>,
    count: u64,
    pairs: u64,
}

impl Tally {
    fn mark(&mut self, residue: u64) {
        let slot = &mut self.hit[residue as usize];
        if !*slot {
            *slot = true;
            self.count += 1;
        }
    }

    fn full(&self) -> bool {
        self.count == self.residues.modulus
    }

    /// Residue of `num / den` when `ν(num) >= ν(den)`.
    fn combine(&mut self, num: Signature, den: Signature) {
        if num.valuation < den.valuation {
            return;
        }
        self.pairs += 1;
        let shift = num.valuation - den.valuation;
        let r = &self.residues;
        let residue = if shift >= r.precision {
            0
        } else {
            let unit = r.mul(num.unit, r.inverse(den.unit));
            r.mul(r.prime.get().pow(shift), unit)
        };
        self.mark(residue);
    }
}

/// Residues mod `p^r` reached by quotients `Q(u)/Q(v)` with `u`, `v` nonzero
/// points of `[-bound, bound]^n`, `Q(v) != 0` and `ν_p(Q(u)) >= ν_p(Q(v))`.
pub fn coverage(form: &QuadraticForm, p: Prime, r: u32, bound: u64) -> Result<CoverageReport> {
    if r == 0 || bound == 0 {
        return Err(Error::invalid("coverage needs r >= 1 and bound >= 1"));
    }
    let residues = Residues::new(p, r)?;
    if residues.modulus > MAX_MODULUS {
        return Err(Error::invalid(format!(
            "{p}^{r} exceeds the coverage limit {MAX_MODULUS}"
        )));
    }
    let eval = Evaluator::new(form);
    let mut tally = Tally {
        residues,
        hit: vec![false; residues.modulus as usize],
        count: 0,
        pairs: 0,
    };
    let mut seen = BTreeSet::new();
    let mut table: Vec<Signature> = Vec::new();
    let _ = lattice::for_each_point(eval.rank(), bound, |pt| {
        match residues.signature(&eval.eval(pt)) {
            None => tally.mark(0),
            Some(sig) => {
                if seen.insert(sig) {
                    tally.combine(sig, sig);
                    for &other in &table {
                        tally.combine(sig, other);
                        tally.combine(other, sig);
                    }
                    table.push(sig);
                }
            }
        }
        if tally.full() {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    let (covered, missing) = (0..residues.modulus).partition(|&x| tally.hit[x as usize]);
    Ok(CoverageReport {
        prime: p,
        r,
        bound,
        covered,
        missing,
        quotients_sampled: tally.pairs,
    })
}

/// Which `(r, bound)` pairs are expected to show full coverage for a dense
/// form. No theorem bounds this; the default `r <= 3`, `bound = 10 p^r` is an
/// empirical choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoverageSchedule {
    pub max_r: u32,
    pub bound_factor: u64,
}

impl Default for CoverageSchedule {
    fn default() -> Self {
        CoverageSchedule {
            max_r: 3,
            bound_factor: 10,
        }
    }
}

impl CoverageSchedule {
    pub fn bound(&self, p: Prime, r: u32) -> u64 {
        self.bound_factor
            .saturating_mul(p.checked_pow_u64(r).unwrap_or(u64::MAX))
    }

    /// `(r, bound)` for `r = 1..=max_r`.
    pub fn entries(&self, p: Prime) -> Vec<(u32, u64)> {
        (1..=self.max_r).map(|r| (r, self.bound(p, r))).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheckReport {
    pub verdict: Verdict,
    pub coverage: CoverageReport,
    /// The certificate, for non-dense verdicts when it survived the search.
    pub certificate: Option<ExclusionCertificate>,
    /// Residues contradicting the verdict: missing ones for a dense form,
    /// covered excluded ones otherwise.
    pub discrepancies: Vec<u64>,
    /// Set when the certificate search found a counterexample.
    pub violation: Option<String>,
}

impl CrossCheckReport {
    pub fn passed(&self) -> bool {
        self.discrepancies.is_empty() && self.violation.is_none()
    }
}

/// Residues mod `p^r` lying inside the certificate's excluded ball, or
/// `None` when the ball is finer than `p^r`.
pub fn excluded_residues(cert: &ExclusionCertificate, r: u32) -> Option<Vec<u64>> {
    let depth = cert.radius_exponent + 1;
    if depth > r {
        return None;
    }
    let p = cert.prime;
    let modulus = p.checked_pow_u64(r)?;
    let step = p.checked_pow_u64(depth)?;
    let inverse = padic::mod_inverse(&cert.target_den, &BigInt::from(step)).ok()?;
    let centre = (&cert.target_num * inverse).to_u64().map(|c| c % step)?;
    Some((centre..modulus).step_by(step as usize).collect())
}

/// Compares the decider's verdict with brute-force coverage at `(r, bound)`.
///
/// A dense verdict must show every residue; a non-dense one must keep its
/// certificate's ball empty up to `bound` and its excluded residues missing.
pub fn cross_check(form: &QuadraticForm, p: Prime, r: u32, bound: u64) -> Result<CrossCheckReport> {
    let verdict = decider::decide(form, p);
    let coverage = coverage(form, p, r, bound)?;
    let mut report = CrossCheckReport {
        verdict,
        coverage,
        certificate: None,
        discrepancies: Vec::new(),
        violation: None,
    };
    if report.verdict.dense {
        report.discrepancies = report.coverage.missing.clone();
        return Ok(report);
    }
    match witness::exclusion_certificate(form, p, bound) {
        Ok(cert) => {
            if let Some(excluded) = excluded_residues(&cert, r) {
                report.discrepancies = excluded
                    .into_iter()
                    .filter(|&x| report.coverage.is_covered(x))
                    .collect();
            }
            report.certificate = Some(cert);
        }
        Err(Error::Internal(msg)) => report.violation = Some(msg),
        Err(e) => return Err(e),
    }
    Ok(report)
}
