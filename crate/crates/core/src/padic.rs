//! Exact p-adic arithmetic on integers and rationals.
//!
//! Everything here works on [`BigInt`] so that intermediate products never
//! overflow. Only rationals and residues at finite precision are modelled;
//! there is no general element type for `Q_p`.

use core::cmp::Ordering;
use core::fmt;

use alloc::format;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A rational prime, checked deterministically at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub const TWO: Prime = Prime(2);

    pub fn new(value: u64) -> Result<Self> {
        if is_prime_u64(value) {
            Ok(Prime(value))
        } else {
            Err(Error::NotPrime(value))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_two(self) -> bool {
        self.0 == 2
    }

    #[inline]
    pub fn is_odd(self) -> bool {
        self.0 != 2
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// `p^e` as a big integer.
    pub fn pow(self, e: u32) -> BigInt {
        num_traits::pow(self.to_bigint(), e as usize)
    }

    /// `p^e` as a `u64`, if it fits.
    pub fn checked_pow_u64(self, e: u32) -> Option<u64> {
        self.0.checked_pow(e)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;

    fn try_from(value: u64) -> Result<Self> {
        Prime::new(value)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve prime bases are a proven
/// witness set for every 64-bit integer.
fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &q in &BASES {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A p-adic valuation: an integer, or `+inf` for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// `true` when the valuation is at least `bound` (always true for `+inf`).
    pub fn at_least(self, bound: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= bound,
            Valuation::Infinite => true,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
            (Valuation::Infinite, _) => Ordering::Greater,
            (_, Valuation::Infinite) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => v.fmt(f),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Splits a nonzero integer as `p^k * u` with `p ∤ u`. Returns `None` for zero.
pub fn split_valuation(n: &BigInt, p: Prime) -> Option<(u32, BigInt)> {
    if n.is_zero() {
        return None;
    }
    if let Some(small) = n.to_i128() {
        let q = p.get() as i128;
        let mut m = small;
        let mut k = 0u32;
        while m % q == 0 {
            m /= q;
            k += 1;
        }
        return Some((k, BigInt::from(m)));
    }
    let q = p.to_bigint();
    let mut m = n.clone();
    let mut k = 0u32;
    loop {
        let (quot, rem) = m.div_rem(&q);
        if !rem.is_zero() {
            break;
        }
        m = quot;
        k += 1;
    }
    Some((k, m))
}

/// `ν_p(n)`; zero maps to [`Valuation::Infinite`].
pub fn valuation(n: &BigInt, p: Prime) -> Valuation {
    match split_valuation(n, p) {
        Some((k, _)) => Valuation::Finite(k as i64),
        None => Valuation::Infinite,
    }
}

/// `ν_p(num / den) = ν_p(num) - ν_p(den)`.
pub fn valuation_rational(num: &BigInt, den: &BigInt, p: Prime) -> Result<Valuation> {
    if den.is_zero() {
        return Err(Error::invalid("zero denominator"));
    }
    Ok(match (valuation(num, p), valuation(den, p)) {
        (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a - b),
        _ => Valuation::Infinite,
    })
}

/// Inverse of `a` modulo `m`, in `[1, m-1]` (or `0` when `m == 1`).
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Result<BigInt> {
    if m < &BigInt::one() {
        return Err(Error::invalid(format!("modulus {m} must be positive")));
    }
    let ext = a.mod_floor(m).extended_gcd(m);
    if !ext.gcd.is_one() {
        return Err(Error::NotInvertible {
            value: a.clone(),
            modulus: m.clone(),
        });
    }
    Ok(ext.x.mod_floor(m))
}

/// Residue of `a` modulo a machine-sized modulus, in `[0, m)`.
pub(crate) fn residue_u64(a: &BigInt, m: u64) -> u64 {
    a.mod_floor(&BigInt::from(m))
        .to_u64()
        .expect("residue is below the modulus")
}

/// Legendre symbol `(a/p)` for odd `p`.
pub fn legendre(a: &BigInt, p: Prime) -> Result<i8> {
    if p.is_two() {
        return Err(Error::invalid("the Legendre symbol needs an odd prime"));
    }
    Ok(legendre_u64(residue_u64(a, p.get()), p.get()))
}

pub(crate) fn legendre_u64(a: u64, p: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    // Euler's criterion.
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// A nonzero rational viewed in `Q_p`: `p^v * (unit_num / unit_den)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdicValue {
    prime: Prime,
    valuation: Valuation,
    unit_num: BigInt,
    unit_den: BigInt,
}

impl PAdicValue {
    pub fn from_rational(num: &BigInt, den: &BigInt, p: Prime) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::invalid("zero denominator"));
        }
        let Some((vn, un)) = split_valuation(num, p) else {
            return Ok(PAdicValue {
                prime: p,
                valuation: Valuation::Infinite,
                unit_num: BigInt::zero(),
                unit_den: BigInt::one(),
            });
        };
        let (vd, ud) = split_valuation(den, p).expect("den is nonzero");
        let (unit_num, unit_den) = if ud.is_negative() {
            (-un, -ud)
        } else {
            (un, ud)
        };
        Ok(PAdicValue {
            prime: p,
            valuation: Valuation::Finite(vn as i64 - vd as i64),
            unit_num,
            unit_den,
        })
    }

    pub fn from_integer(n: &BigInt, p: Prime) -> Self {
        Self::from_rational(n, &BigInt::one(), p).expect("denominator is one")
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn valuation(&self) -> Valuation {
        self.valuation
    }

    pub fn is_zero(&self) -> bool {
        self.valuation.is_infinite()
    }

    /// The unit part reduced modulo `p^r`, coprime to `p`. `None` for zero.
    pub fn unit_residue(&self, r: u32) -> Option<BigInt> {
        if self.is_zero() {
            return None;
        }
        let modulus = self.prime.pow(r.max(1));
        let inv = mod_inverse(&self.unit_den, &modulus).expect("unit denominator is coprime to p");
        Some((&self.unit_num * inv).mod_floor(&modulus))
    }
}

/// Is `num/den` a square in `Q_p`? Zero counts as the degenerate square.
pub fn is_square_in_qp(num: &BigInt, den: &BigInt, p: Prime) -> Result<bool> {
    let value = PAdicValue::from_rational(num, den, p)?;
    let Valuation::Finite(v) = value.valuation() else {
        return Ok(true);
    };
    if v.rem_euclid(2) != 0 {
        return Ok(false);
    }
    Ok(unit_is_square(&value))
}

fn unit_is_square(value: &PAdicValue) -> bool {
    let p = value.prime();
    if p.is_two() {
        value.unit_residue(3).expect("nonzero") == BigInt::one()
    } else {
        let u = value.unit_residue(1).expect("nonzero");
        legendre_u64(u.to_u64().expect("below p"), p.get()) == 1
    }
}

/// A coset of `(Q_p^×)^2` in `Q_p^×`.
///
/// `unit_class` is the quadratic-residue bit of the unit part for odd `p`
/// (`0` for residues, `1` for non-residues) and the unit part mod 8 for
/// `p = 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareClass {
    pub prime: Prime,
    pub odd_valuation: bool,
    pub unit_class: u8,
}

pub fn square_class(num: &BigInt, den: &BigInt, p: Prime) -> Result<SquareClass> {
    if num.is_zero() {
        return Err(Error::invalid("zero has no square class"));
    }
    let value = PAdicValue::from_rational(num, den, p)?;
    let v = value.valuation().finite().expect("nonzero");
    let unit_class = if p.is_two() {
        value
            .unit_residue(3)
            .expect("nonzero")
            .to_u8()
            .expect("below 8")
    } else {
        u8::from(!unit_is_square(&value))
    };
    Ok(SquareClass {
        prime: p,
        odd_valuation: v.rem_euclid(2) == 1,
        unit_class,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn primality() {
        let small: alloc::vec::Vec<u64> = (0..60).filter(|&n| Prime::new(n).is_ok()).collect();
        assert_eq!(
            small,
            [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(Prime::new(18446744073709551557).is_ok());
        assert_eq!(Prime::new(3215031751), Err(Error::NotPrime(3215031751)));
        assert_eq!(Prime::new(1), Err(Error::NotPrime(1)));
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&big(12), p(2)), Valuation::Finite(2));
        assert_eq!(valuation(&big(1), p(7)), Valuation::Finite(0));
        assert_eq!(valuation(&big(-250), p(5)), Valuation::Finite(3));
        assert_eq!(valuation(&big(0), p(5)), Valuation::Infinite);
    }

    #[test]
    fn valuation_of_huge_integers() {
        let n = p(3).pow(200) * big(-7);
        assert_eq!(valuation(&n, p(3)), Valuation::Finite(200));
    }

    #[test]
    fn valuation_rational_examples() {
        assert_eq!(
            valuation_rational(&big(3), &big(5), p(5)),
            Ok(Valuation::Finite(-1))
        );
        assert_eq!(
            valuation_rational(&big(0), &big(7), p(3)),
            Ok(Valuation::Infinite)
        );
        assert_eq!(
            valuation_rational(&big(50), &big(10), p(5)),
            Ok(Valuation::Finite(1))
        );
        assert!(matches!(
            valuation_rational(&big(1), &big(0), p(5)),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(&big(-4), p(5)), Ok(1));
        assert_eq!(legendre(&big(-4), p(3)), Ok(-1));
        assert_eq!(legendre(&big(10), p(5)), Ok(0));
        assert!(legendre(&big(3), Prime::TWO).is_err());
    }

    #[test]
    fn legendre_matches_brute_force() {
        for q in [3u64, 5, 7, 11, 13, 17, 19, 23] {
            let squares: BTreeSet<u64> = (1..q).map(|x| x * x % q).collect();
            for a in -40i64..40 {
                let r = a.rem_euclid(q as i64) as u64;
                let expected = if r == 0 {
                    0
                } else if squares.contains(&r) {
                    1
                } else {
                    -1
                };
                assert_eq!(legendre(&big(a), p(q)), Ok(expected), "({a}/{q})");
            }
        }
    }

    #[test]
    fn square_examples() {
        assert_eq!(is_square_in_qp(&big(-4), &big(1), p(5)), Ok(true));
        assert_eq!(is_square_in_qp(&big(-4), &big(1), p(2)), Ok(false));
        assert_eq!(is_square_in_qp(&big(9), &big(4), p(7)), Ok(true));
        assert_eq!(is_square_in_qp(&big(0), &big(4), p(7)), Ok(true));
        assert_eq!(is_square_in_qp(&big(17), &big(1), p(2)), Ok(true));
        assert_eq!(is_square_in_qp(&big(-7), &big(1), p(2)), Ok(true));
        assert_eq!(is_square_in_qp(&big(1), &big(-1), p(2)), Ok(false));
        assert!(is_square_in_qp(&big(1), &big(0), p(2)).is_err());
    }

    #[test]
    fn no_x_squared_is_minus_four_mod_32() {
        assert!((0..32i64).all(|x| (x * x + 4).rem_euclid(32) != 0));
    }

    #[test]
    fn square_class_examples() {
        let c = |n: i64, q: u64| square_class(&big(n), &big(1), p(q)).unwrap();
        assert_eq!(c(2, 5), c(8, 5));
        assert_ne!(c(2, 5), c(10, 5));
        assert_eq!(c(1, 2), c(17, 2));
        assert_eq!(c(-1, 2).unit_class, 7);
        assert!(square_class(&big(0), &big(1), p(5)).is_err());
    }

    #[test]
    fn mod_inverse_examples() {
        assert_eq!(mod_inverse(&big(3), &big(7)), Ok(big(5)));
        assert_eq!(mod_inverse(&big(1), &big(9)), Ok(big(1)));
        assert_eq!(mod_inverse(&big(5), &big(8)), Ok(big(5)));
        assert_eq!(mod_inverse(&big(-3), &big(7)), Ok(big(2)));
        assert!(matches!(
            mod_inverse(&big(6), &big(9)),
            Err(Error::NotInvertible { .. })
        ));
    }

    #[test]
    fn unit_residue_is_coprime() {
        let v = PAdicValue::from_rational(&big(-250), &big(3), p(5)).unwrap();
        assert_eq!(v.valuation(), Valuation::Finite(3));
        for r in 1..6 {
            let u = v.unit_residue(r).unwrap();
            assert!(!u.is_multiple_of(&big(5)));
            // -2/3 * 3 == -2
            assert_eq!(Integer::mod_floor(&(u * 3 + 2), &p(5).pow(r)), big(0));
        }
        assert!(PAdicValue::from_integer(&big(0), p(5))
            .unit_residue(2)
            .is_none());
    }
}
