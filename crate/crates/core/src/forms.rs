//! Integral quadratic forms: binary `ax^2 + bxy + cy^2` and general
//! `sum_{i<=j} a_ij x_i x_j`, plus the transforms the deciders rely on.

use core::fmt;
use core::str::FromStr;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::padic::{self, Prime};

pub type Point2 = (BigInt, BigInt);

fn gcd_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values.into_iter().fold(BigInt::zero(), |acc, v| acc.gcd(v))
}

/// `ax^2 + bxy + cy^2`, primitive and with nonzero discriminant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

impl BinaryForm {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Result<Self> {
        let (a, b, c) = (a.into(), b.into(), c.into());
        let g = gcd_all([&a, &b, &c]);
        if !g.is_one() {
            // gcd 0 means the zero form, which is also singular; report the
            // imprimitivity first since that is what the caller typed.
            return Err(Error::Imprimitive(g));
        }
        if (&b * &b - BigInt::from(4) * &a * &c).is_zero() {
            return Err(Error::Singular("the discriminant b^2 - 4ac"));
        }
        Ok(BinaryForm { a, b, c })
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    pub fn evaluate(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x + &self.b * x * y + &self.c * y * y
    }

    pub fn factor_discriminant(&self, p: Prime) -> DiscFactorization {
        DiscFactorization::new(self.discriminant(), p)
    }

    /// Exhaustive search for a nonzero zero of the form over `F_p`.
    ///
    /// Every nonzero vector of `F_p^2` is a scalar multiple of `(1, t)` or
    /// `(0, 1)`, and the form is homogeneous, so scanning those `p + 1`
    /// representatives covers all of `F_p^2 \ {0}`.
    pub fn is_isotropic_mod_p(&self, p: Prime) -> bool {
        let q = p.get();
        let [a, b, c] = [&self.a, &self.b, &self.c].map(|v| padic::residue_u64(v, q) as u128);
        let m = q as u128;
        if c % m == 0 {
            return true;
        }
        (0..m).any(|t| (a + b * t % m + c * (t * t % m)).is_multiple_of(m))
    }

    pub fn is_singular_mod_p(&self, p: Prime) -> bool {
        self.discriminant().is_multiple_of(&p.to_bigint())
    }

    /// The form with `a` and `c` exchanged, i.e. `Q(y, x)`.
    pub fn swapped(&self) -> BinaryForm {
        BinaryForm {
            a: self.c.clone(),
            b: self.b.clone(),
            c: self.a.clone(),
        }
    }

    /// `Q(M (x, y)^T)` for an integer matrix `M = [[m00, m01], [m10, m11]]`.
    ///
    /// Unimodular `M` preserve primitivity and discriminant; other matrices
    /// may produce an invalid form, which is reported as an error.
    pub fn substitute(&self, m: [[i64; 2]; 2]) -> Result<BinaryForm> {
        let [[p, q], [r, s]] = m.map(|row| row.map(BigInt::from));
        let a = self.evaluate(&p, &r);
        let c = self.evaluate(&q, &s);
        let b = BigInt::from(2) * &self.a * &p * &q
            + &self.b * (&p * &s + &q * &r)
            + BigInt::from(2) * &self.c * &r * &s;
        BinaryForm::new(a, b, c)
    }

    pub fn to_general(&self) -> GeneralForm {
        GeneralForm {
            rank: 2,
            coeffs: alloc::vec![self.a.clone(), self.b.clone(), self.c.clone()],
        }
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.a, self.b, self.c)
    }
}

fn parse_int_list(input: &str, list: &str) -> Result<Vec<BigInt>> {
    list.split(',')
        .map(|tok| {
            let tok = tok.trim();
            let tok = tok.strip_prefix('+').unwrap_or(tok);
            BigInt::from_str(tok).map_err(|_| Error::Parse {
                input: input.to_string(),
                reason: format!("{tok:?} is not an integer"),
            })
        })
        .collect()
}

fn strip_ws(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

impl FromStr for BinaryForm {
    type Err = Error;

    /// Parses `"a,b,c"`, ignoring whitespace.
    fn from_str(s: &str) -> Result<Self> {
        let compact = strip_ws(s);
        let coeffs = parse_int_list(s, &compact)?;
        let [a, b, c]: [BigInt; 3] = coeffs.try_into().map_err(|v: Vec<BigInt>| Error::Parse {
            input: s.to_string(),
            reason: format!("expected 3 coefficients, found {}", v.len()),
        })?;
        BinaryForm::new(a, b, c)
    }
}

/// `sum_{i<=j} a_ij x_i x_j` in `rank` variables, stored upper-triangular in
/// row order `a11, a12, .., a1r, a22, .., arr`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneralForm {
    rank: usize,
    coeffs: Vec<BigInt>,
}

impl GeneralForm {
    pub fn new(rank: usize, coeffs: Vec<BigInt>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::invalid("rank must be at least 1"));
        }
        let expected = rank * (rank + 1) / 2;
        if coeffs.len() != expected {
            return Err(Error::invalid(format!(
                "rank {rank} needs {expected} upper-triangular coefficients, found {}",
                coeffs.len()
            )));
        }
        let g = gcd_all(&coeffs);
        if !g.is_one() {
            return Err(Error::Imprimitive(g));
        }
        let form = GeneralForm { rank, coeffs };
        if form.determinant().is_zero() {
            return Err(Error::Singular("det(A)"));
        }
        Ok(form)
    }

    /// Sum of squares `x_1^2 + .. + x_r^2`.
    pub fn sum_of_squares(rank: usize) -> Result<Self> {
        Self::diagonal(&alloc::vec![1; rank])
    }

    pub fn diagonal(diag: &[i64]) -> Result<Self> {
        let rank = diag.len();
        let mut coeffs = Vec::with_capacity(rank * (rank + 1) / 2);
        for (i, &d) in diag.iter().enumerate() {
            coeffs.push(BigInt::from(d));
            coeffs.extend((i + 1..rank).map(|_| BigInt::zero()));
        }
        Self::new(rank, coeffs)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    fn index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * self.rank - i * (i + 1) / 2 + j
    }

    /// `a_ij` for `i <= j` (0-based); symmetric access for `i > j`.
    pub fn coefficient(&self, i: usize, j: usize) -> &BigInt {
        &self.coeffs[self.index(i, j)]
    }

    /// The symmetric matrix `A` with `Q(x) = x^T A x / 2`: diagonal `2 a_ii`,
    /// off-diagonal `a_ij`.
    pub fn gram_matrix(&self) -> Vec<Vec<BigInt>> {
        (0..self.rank)
            .map(|i| {
                (0..self.rank)
                    .map(|j| {
                        let v = self.coefficient(i, j).clone();
                        if i == j {
                            v * 2
                        } else {
                            v
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// `det(A)`, computed exactly by fraction-free Bareiss elimination.
    pub fn determinant(&self) -> BigInt {
        bareiss_determinant(self.gram_matrix())
    }

    pub fn evaluate(&self, point: &[BigInt]) -> Result<BigInt> {
        if point.len() != self.rank {
            return Err(Error::DimensionMismatch {
                rank: self.rank,
                got: point.len(),
            });
        }
        let mut total = BigInt::zero();
        for i in 0..self.rank {
            for j in i..self.rank {
                let a = self.coefficient(i, j);
                if !a.is_zero() {
                    total += a * &point[i] * &point[j];
                }
            }
        }
        Ok(total)
    }

    /// The binary form with the same coefficients, when `rank == 2`.
    pub fn as_binary(&self) -> Option<BinaryForm> {
        (self.rank == 2).then(|| BinaryForm {
            a: self.coeffs[0].clone(),
            b: self.coeffs[1].clone(),
            c: self.coeffs[2].clone(),
        })
    }
}

fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

impl fmt::Display for GeneralForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}; ", self.rank)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for GeneralForm {
    type Err = Error;

    /// Parses `"r; a11,a12,...,arr"`, ignoring whitespace.
    fn from_str(s: &str) -> Result<Self> {
        let compact = strip_ws(s);
        let (rank, list) = compact.split_once(';').ok_or_else(|| Error::Parse {
            input: s.to_string(),
            reason: "expected \"r; a11,a12,...,arr\"".to_string(),
        })?;
        let rank: usize = rank.parse().map_err(|_| Error::Parse {
            input: s.to_string(),
            reason: format!("{rank:?} is not a rank"),
        })?;
        GeneralForm::new(rank, parse_int_list(s, list)?)
    }
}

/// Either kind of form, as accepted on the command line.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum QuadraticForm {
    Binary(BinaryForm),
    General(GeneralForm),
}

impl QuadraticForm {
    pub fn rank(&self) -> usize {
        match self {
            QuadraticForm::Binary(_) => 2,
            QuadraticForm::General(g) => g.rank(),
        }
    }

    pub fn evaluate(&self, point: &[BigInt]) -> Result<BigInt> {
        match self {
            QuadraticForm::Binary(f) => match point {
                [x, y] => Ok(f.evaluate(x, y)),
                _ => Err(Error::DimensionMismatch {
                    rank: 2,
                    got: point.len(),
                }),
            },
            QuadraticForm::General(g) => g.evaluate(point),
        }
    }

    /// Upper-triangular coefficients in row order.
    pub fn coefficients(&self) -> Vec<BigInt> {
        match self {
            QuadraticForm::Binary(f) => alloc::vec![f.a.clone(), f.b.clone(), f.c.clone()],
            QuadraticForm::General(g) => g.coeffs.clone(),
        }
    }

    /// The binary form behind a rank-2 form of either kind.
    pub fn as_binary(&self) -> Option<BinaryForm> {
        match self {
            QuadraticForm::Binary(f) => Some(f.clone()),
            QuadraticForm::General(g) => g.as_binary(),
        }
    }
}

impl From<BinaryForm> for QuadraticForm {
    fn from(f: BinaryForm) -> Self {
        QuadraticForm::Binary(f)
    }
}

impl From<GeneralForm> for QuadraticForm {
    fn from(g: GeneralForm) -> Self {
        QuadraticForm::General(g)
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadraticForm::Binary(b) => b.fmt(f),
            QuadraticForm::General(g) => g.fmt(f),
        }
    }
}

impl FromStr for QuadraticForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.contains(';') {
            s.parse().map(QuadraticForm::General)
        } else {
            s.parse().map(QuadraticForm::Binary)
        }
    }
}

/// `disc = p^k * ell` with `p ∤ ell`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiscFactorization {
    pub prime: Prime,
    pub k: u32,
    pub ell: BigInt,
    pub disc: BigInt,
}

impl DiscFactorization {
    pub fn new(disc: BigInt, p: Prime) -> Self {
        let (k, ell) = padic::split_valuation(&disc, p).expect("discriminant is nonzero");
        DiscFactorization {
            prime: p,
            k,
            ell,
            disc,
        }
    }

    /// `ell` reduced into `[0, 8)`; only meaningful for `p = 2`.
    pub fn ell_mod_8(&self) -> u8 {
        self.ell
            .mod_floor(&BigInt::from(8))
            .to_u8()
            .expect("below 8")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReductionKind {
    /// `Q'(x, y) = Q(-x - u y, y)` at an odd prime.
    OddPrime,
    /// `Q'(x, y) = Q(x + q y, y)` at `p = 2`.
    Two,
}

/// Trace of a singular reduction `Q -> Q' -> Q''`.
///
/// `Q'` is equivalent to `Q` (after an optional `a <-> c` swap) and
/// `Q'(x, y) = Q''(x, p^(k/2) y)`; `Q''` has discriminant `ell`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularReduction {
    pub kind: ReductionKind,
    pub prime: Prime,
    pub k: u32,
    /// Whether `a` and `c` were exchanged so that `p ∤ a` (odd) or `a` odd (two).
    pub swapped: bool,
    /// The least nonnegative shift `u` (odd prime) or `q` (two).
    pub shift: BigInt,
    pub reduced: BinaryForm,
}

impl SingularReduction {
    pub fn reduced(&self) -> &BinaryForm {
        &self.reduced
    }

    fn half_power(&self) -> BigInt {
        self.prime.pow(self.k / 2)
    }

    /// `Q' = a x^2 + p^(k/2) B xy + p^k C y^2`.
    pub fn intermediate(&self) -> BinaryForm {
        let h = self.half_power();
        BinaryForm {
            a: self.reduced.a.clone(),
            b: &self.reduced.b * &h,
            c: &self.reduced.c * &h * &h,
        }
    }

    /// Maps a point of `Q''` to a point `(x, y)` of the original form with
    /// `Q(x, y) = p^k * Q''(X, Y)`. Quotients of mapped points therefore equal
    /// quotients of the `Q''` values.
    pub fn map_back(&self, x: &BigInt, y: &BigInt) -> Point2 {
        let scaled = self.half_power() * x;
        let first = match self.kind {
            ReductionKind::OddPrime => -scaled - &self.shift * y,
            ReductionKind::Two => scaled + &self.shift * y,
        };
        if self.swapped {
            (y.clone(), first)
        } else {
            (first, y.clone())
        }
    }
}

fn check_exponent(f: &BinaryForm, p: Prime, k: u32) -> Result<DiscFactorization> {
    let fact = f.factor_discriminant(p);
    if fact.k != k {
        return Err(Error::invalid(format!(
            "discriminant {} has {p}-adic valuation {}, not {k}",
            fact.disc, fact.k
        )));
    }
    if k < 2 || k % 2 == 1 {
        return Err(Error::invalid(format!(
            "singular reduction needs an even exponent k >= 2, got k = {k}"
        )));
    }
    Ok(fact)
}

fn exact_div(num: &BigInt, den: &BigInt, what: &str) -> Result<BigInt> {
    let (q, r) = num.div_rem(den);
    if r.is_zero() {
        Ok(q)
    } else {
        Err(Error::internal(format!(
            "{what}: {num} is not divisible by {den}"
        )))
    }
}

/// Reduces a form whose discriminant is `p^k * ell` (odd `p`, even `k >= 2`)
/// to `Q''` of discriminant `ell`.
pub fn reduce_odd_singular(f: &BinaryForm, p: Prime, k: u32) -> Result<SingularReduction> {
    if p.is_two() {
        return Err(Error::invalid("reduce_odd_singular needs an odd prime"));
    }
    let fact = check_exponent(f, p, k)?;
    let pb = p.to_bigint();
    let swapped = f.a.is_multiple_of(&pb);
    let g = if swapped { f.swapped() } else { f.clone() };
    if g.a.is_multiple_of(&pb) {
        return Err(Error::internal(format!(
            "{p} divides both a and c of primitive {f}"
        )));
    }
    let modulus = p.pow(k);
    let two_a_inv = padic::mod_inverse(&(BigInt::from(2) * &g.a), &modulus)?;
    let u = (two_a_inv * &g.b).mod_floor(&modulus);

    let b_num = BigInt::from(2) * &u * &g.a - &g.b;
    let c_num = &u * &u * &g.a - &u * &g.b + &g.c;
    let big_b = exact_div(&b_num, &p.pow(k / 2), "B")?;
    let big_c = exact_div(&c_num, &modulus, "C")?;
    let reduced = BinaryForm::new(g.a.clone(), big_b, big_c)
        .map_err(|e| Error::internal(format!("reduced form invalid: {e}")))?;
    if reduced.discriminant() != fact.ell {
        return Err(Error::internal("reduced discriminant differs from ell"));
    }
    Ok(SingularReduction {
        kind: ReductionKind::OddPrime,
        prime: p,
        k,
        swapped,
        shift: u,
        reduced,
    })
}

/// Reduces a form with discriminant `2^k * ell` (`k >= 2` even,
/// `ell ≡ 1 mod 8`) to `Q''` of discriminant `ell`.
pub fn reduce_two_singular(f: &BinaryForm, k: u32) -> Result<SingularReduction> {
    let fact = check_exponent(f, Prime::TWO, k)?;
    if fact.ell_mod_8() != 1 {
        return Err(Error::invalid(format!(
            "reduce_two_singular needs ell ≡ 1 mod 8, got ell = {}",
            fact.ell
        )));
    }
    let two = BigInt::from(2);
    if f.b.is_odd() {
        return Err(Error::internal(
            "b is odd although 4 divides the discriminant",
        ));
    }
    let swapped = f.a.is_even();
    let g = if swapped { f.swapped() } else { f.clone() };
    if g.a.is_even() {
        return Err(Error::internal(format!(
            "a and c of primitive {f} are both even"
        )));
    }
    let modulus = Prime::TWO.pow(k);
    let half = Prime::TWO.pow(k / 2);
    // q ≡ -b/(2a) + 2^(k/2 - 1) mod 2^k, with b even.
    let a_inv = padic::mod_inverse(&g.a, &modulus)?;
    let q = (-(&g.b / &two) * a_inv + Prime::TWO.pow(k / 2 - 1)).mod_floor(&modulus);

    let b_num = &two * &g.a * &q + &g.b;
    let c_num = &g.c + &g.b * &q + &g.a * &q * &q;
    let big_b = exact_div(&b_num, &half, "B")?;
    let big_c = exact_div(&c_num, &modulus, "C")?;
    let reduced = BinaryForm::new(g.a.clone(), big_b, big_c)
        .map_err(|e| Error::internal(format!("reduced form invalid: {e}")))?;
    if reduced.discriminant() != fact.ell {
        return Err(Error::internal("reduced discriminant differs from ell"));
    }
    Ok(SingularReduction {
        kind: ReductionKind::Two,
        prime: Prime::TWO,
        k,
        swapped,
        shift: q,
        reduced,
    })
}

/// Given representations of `A`, `B`, `C` by `f`, returns a point
/// representing `A * B * C`.
pub fn arnold_compose(f: &BinaryForm, p1: &Point2, p2: &Point2, p3: &Point2) -> Point2 {
    let (a, b, c) = (&f.a, &f.b, &f.c);
    let ((x1, y1), (x2, y2), (x3, y3)) = (p1, p2, p3);
    let x = (a * x1 * x2 - c * y1 * y2) * x3 + (c * (y1 * x2 + x1 * y2) + b * x1 * x2) * y3;
    let y = (a * (x1 * y2 + x2 * y1) + b * y1 * y2) * x3 + (-(a * x1 * x2) + c * y1 * y2) * y3;
    (x, y)
}
