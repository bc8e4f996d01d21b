//! Bounded lattice enumeration and p-adic bookkeeping of form values.
//!
//! Points are visited shell by shell (sup-norm `1, 2, ..`), keeping only one
//! of `x` and `-x` since `Q(-x) = Q(x)`. Values are collapsed to a
//! [`Signature`]: valuation plus unit part modulo a fixed `p^M`, which is all
//! the information a quotient's residue or ball membership depends on.

use core::ops::ControlFlow;

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::forms::QuadraticForm;
use crate::padic::{self, PAdicValue, Prime, Valuation};

pub(crate) enum Value {
    Small(i128),
    Big(BigInt),
}

/// Evaluates a form at small integer points, in `i128` when that cannot
/// overflow and in big integers otherwise.
pub(crate) struct Evaluator {
    rank: usize,
    small: Option<Vec<i64>>,
    big: Vec<BigInt>,
}

impl Evaluator {
    pub(crate) fn new(form: &QuadraticForm) -> Self {
        let big = form.coefficients();
        let small = big.iter().map(|c| c.to_i64()).collect();
        Evaluator {
            rank: form.rank(),
            small,
            big,
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rank
    }

    fn eval_small(&self, coeffs: &[i64], point: &[i64]) -> Option<i128> {
        let mut total: i128 = 0;
        let mut idx = 0;
        for i in 0..self.rank {
            for j in i..self.rank {
                let c = coeffs[idx];
                idx += 1;
                if c == 0 {
                    continue;
                }
                let term = (c as i128)
                    .checked_mul(point[i] as i128)?
                    .checked_mul(point[j] as i128)?;
                total = total.checked_add(term)?;
            }
        }
        Some(total)
    }

    pub(crate) fn eval(&self, point: &[i64]) -> Value {
        if let Some(coeffs) = &self.small {
            if let Some(v) = self.eval_small(coeffs, point) {
                return Value::Small(v);
            }
        }
        let mut total = BigInt::from(0);
        let mut idx = 0;
        for i in 0..self.rank {
            for j in i..self.rank {
                total += &self.big[idx] * point[i] * point[j];
                idx += 1;
            }
        }
        Value::Big(total)
    }
}

/// Valuation and unit residue of a nonzero value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Signature {
    pub valuation: u32,
    pub unit: u64,
}

/// Residue arithmetic modulo `p^precision`, which must fit in a `u64`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Residues {
    pub prime: Prime,
    pub precision: u32,
    pub modulus: u64,
}

impl Residues {
    pub(crate) fn new(prime: Prime, precision: u32) -> Result<Self> {
        let precision = precision.max(1);
        let modulus = prime
            .checked_pow_u64(precision)
            .filter(|m| *m <= (1u64 << 62))
            .ok_or_else(|| {
                Error::invalid(alloc::format!(
                    "{prime}^{precision} is too large for residue enumeration"
                ))
            })?;
        Ok(Residues {
            prime,
            precision,
            modulus,
        })
    }

    pub(crate) fn signature(&self, value: &Value) -> Option<Signature> {
        match value {
            Value::Small(v) => {
                if *v == 0 {
                    return None;
                }
                let q = self.prime.get() as i128;
                let mut m = *v;
                let mut k = 0;
                while m % q == 0 {
                    m /= q;
                    k += 1;
                }
                Some(Signature {
                    valuation: k,
                    unit: m.rem_euclid(self.modulus as i128) as u64,
                })
            }
            Value::Big(v) => {
                let (k, u) = padic::split_valuation(v, self.prime)?;
                Some(Signature {
                    valuation: k,
                    unit: padic::residue_u64(&u, self.modulus),
                })
            }
        }
    }

    pub(crate) fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    pub(crate) fn inverse(&self, a: u64) -> u64 {
        // a is a unit; extended Euclid on i128.
        let (mut r0, mut r1) = (self.modulus as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1, "{a} is not a unit mod {}", self.modulus);
        t0.rem_euclid(self.modulus as i128) as u64
    }
}

/// Calls `visit` on every nonzero point of `[-m, m]^rank` with sup-norm
/// exactly `m` whose first nonzero coordinate is positive.
pub(crate) fn for_each_in_shell<B>(
    rank: usize,
    m: i64,
    mut visit: impl FnMut(&[i64]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    let mut point = vec![0i64; rank];
    let mut ranges = vec![(0i64, 0i64); rank];
    for pivot in 0..rank {
        for (j, r) in ranges.iter_mut().enumerate() {
            *r = match j.cmp(&pivot) {
                core::cmp::Ordering::Less => (-m + 1, m - 1),
                core::cmp::Ordering::Equal => (-m, m),
                core::cmp::Ordering::Greater => (-m, m),
            };
        }
        for sign in [m, -m] {
            ranges[pivot] = (sign, sign);
            odometer(&ranges, &mut point, |pt| {
                let first = pt.iter().find(|&&c| c != 0).copied().unwrap_or(0);
                if first > 0 {
                    visit(pt)
                } else {
                    ControlFlow::Continue(())
                }
            })?;
        }
    }
    ControlFlow::Continue(())
}

fn odometer<B>(
    ranges: &[(i64, i64)],
    point: &mut [i64],
    mut visit: impl FnMut(&[i64]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    if ranges.iter().any(|(lo, hi)| lo > hi) {
        return ControlFlow::Continue(());
    }
    for (c, (lo, _)) in point.iter_mut().zip(ranges) {
        *c = *lo;
    }
    loop {
        visit(point)?;
        let mut idx = ranges.len();
        loop {
            if idx == 0 {
                return ControlFlow::Continue(());
            }
            idx -= 1;
            if point[idx] < ranges[idx].1 {
                point[idx] += 1;
                for j in idx + 1..ranges.len() {
                    point[j] = ranges[j].0;
                }
                break;
            }
        }
    }
}

/// Visits half of the nonzero points of `[-bound, bound]^rank`, one per
/// `±x` pair, shell by shell.
pub(crate) fn for_each_point<B>(
    rank: usize,
    bound: u64,
    mut visit: impl FnMut(&[i64]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    for m in 1..=bound as i64 {
        for_each_in_shell(rank, m, &mut visit)?;
    }
    ControlFlow::Continue(())
}

/// The set `{q : ν_p(q - target) >= min_valuation}`.
#[derive(Clone, Debug)]
pub(crate) struct Ball {
    residues: Residues,
    /// `None` for target zero; otherwise `(ν_p(target), unit residue)`.
    target: Option<(i64, u64)>,
    min_valuation: i64,
}

impl Ball {
    pub(crate) fn new(
        prime: Prime,
        num: &BigInt,
        den: &BigInt,
        min_valuation: i64,
    ) -> Result<Self> {
        let value = PAdicValue::from_rational(num, den, prime)?;
        let Valuation::Finite(e) = value.valuation() else {
            return Ok(Ball {
                residues: Residues::new(prime, 1)?,
                target: None,
                min_valuation,
            });
        };
        let precision = (min_valuation - e).clamp(1, u32::MAX as i64) as u32;
        let residues = Residues::new(prime, precision)?;
        let unit = value.unit_residue(precision).expect("nonzero");
        Ok(Ball {
            residues,
            target: Some((e, unit.to_u64().expect("below the modulus"))),
            min_valuation,
        })
    }

    pub(crate) fn residues(&self) -> &Residues {
        &self.residues
    }

    /// Does the quotient `0 / den` lie in the ball?
    pub(crate) fn contains_zero(&self) -> bool {
        match self.target {
            None => true,
            Some((e, _)) => e >= self.min_valuation,
        }
    }

    pub(crate) fn contains(&self, num: Signature, den: Signature) -> bool {
        let d = num.valuation as i64 - den.valuation as i64;
        let m = self.min_valuation;
        match self.target {
            None => d >= m,
            Some((e, tau)) => {
                if d != e {
                    return d.min(e) >= m;
                }
                if e >= m {
                    return true;
                }
                let r = &self.residues;
                r.mul(num.unit, r.inverse(den.unit)) == tau
            }
        }
    }
}

/// First pair of points (numerator, denominator) found by shell enumeration
/// whose quotient lies in `ball`. The numerator may be the zero vector.
pub(crate) fn search_ball(
    form: &QuadraticForm,
    ball: &Ball,
    bound: u64,
) -> Option<(Vec<i64>, Vec<i64>)> {
    let eval = Evaluator::new(form);
    let rank = eval.rank();
    let mut seen = BTreeSet::new();
    let mut table: Vec<(Signature, Vec<i64>)> = Vec::new();
    let found = for_each_point(rank, bound, |pt| {
        let Some(sig) = ball.residues().signature(&eval.eval(pt)) else {
            return ControlFlow::Continue(());
        };
        if !seen.insert(sig) {
            return ControlFlow::Continue(());
        }
        if table.is_empty() && ball.contains_zero() {
            return ControlFlow::Break((vec![0; rank], pt.to_vec()));
        }
        if ball.contains(sig, sig) {
            return ControlFlow::Break((pt.to_vec(), pt.to_vec()));
        }
        for (other, other_pt) in &table {
            if ball.contains(sig, *other) {
                return ControlFlow::Break((pt.to_vec(), other_pt.clone()));
            }
            if ball.contains(*other, sig) {
                return ControlFlow::Break((other_pt.clone(), pt.to_vec()));
            }
        }
        table.push((sig, pt.to_vec()));
        ControlFlow::Continue(())
    });
    match found {
        ControlFlow::Break(pair) => Some(pair),
        ControlFlow::Continue(()) => None,
    }
}
