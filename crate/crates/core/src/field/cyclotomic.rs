//! Exact arithmetic in the real subfield of `Q(ζ_N)`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::approx::CosineTable;
use crate::error::{Error, Result};
use crate::system::Order;

/// The cyclotomic field `Q(ζ_N)`, presented as `Q[x] / Φ_N(x)`.
pub struct CyclotomicField {
    order: u64,
    degree: usize,
    modulus: Vec<i64>,
    // Nonzero coefficients of Φ_N below the leading term.
    reducer: Vec<(usize, BigInt)>,
    cosines: CosineTable,
}

impl PartialEq for CyclotomicField {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
    }
}

impl Eq for CyclotomicField {}

impl fmt::Debug for CyclotomicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.order)
    }
}

static FIELDS: OnceLock<Mutex<HashMap<u64, Arc<CyclotomicField>>>> = OnceLock::new();

/// Returns the (interned) field of order `n`.
pub fn cyclotomic_field(n: u64) -> Arc<CyclotomicField> {
    assert!(n >= 1, "cyclotomic order must be positive");
    let fields = FIELDS.get_or_init(Default::default);
    if let Some(f) = fields.lock().expect("field cache poisoned").get(&n) {
        return f.clone();
    }
    let field = Arc::new(CyclotomicField::build(n));
    fields
        .lock()
        .expect("field cache poisoned")
        .entry(n)
        .or_insert(field)
        .clone()
}

impl CyclotomicField {
    fn build(order: u64) -> CyclotomicField {
        let modulus = cyclotomic_polynomial(order);
        let degree = modulus.len() - 1;
        let reducer = modulus[..degree]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, BigInt::from(c)))
            .collect();
        CyclotomicField {
            order,
            degree,
            modulus,
            reducer,
            cosines: CosineTable::new(order, degree, 64),
        }
    }

    /// `N`.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// `φ(N)`, the length of every representative.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficients of `Φ_N`, lowest degree first.
    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }

    /// Reduces a polynomial of any length modulo `Φ_N` in place.
    fn reduce(&self, poly: &mut Vec<BigInt>) {
        let d = self.degree;
        for k in (d..poly.len()).rev() {
            if poly[k].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut poly[k]);
            for (i, a) in &self.reducer {
                poly[k - d + i] -= &c * a;
            }
        }
        poly.resize(d, BigInt::zero());
    }

    /// `ζ^k` reduced, for any integer exponent.
    fn monomial(&self, k: i64) -> Vec<BigInt> {
        let e = k.rem_euclid(self.order as i64) as usize;
        let mut poly = vec![BigInt::zero(); (e + 1).max(self.degree)];
        poly[e] = BigInt::one();
        self.reduce(&mut poly);
        poly
    }
}

/// `Φ_n` via `x^n - 1 = ∏_{d | n} Φ_d`.
fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    let n = n as usize;
    let mut poly: Vec<i128> = vec![0; n + 1];
    poly[0] = -1;
    poly[n] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let divisor: Vec<i128> = cyclotomic_polynomial(d as u64).into_iter().map(i128::from).collect();
            poly = divide_monic(&poly, &divisor);
        }
    }
    poly.into_iter()
        .map(|c| i64::try_from(c).expect("cyclotomic coefficient fits in i64"))
        .collect()
}

fn divide_monic(num: &[i128], den: &[i128]) -> Vec<i128> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i128; num.len() - dn];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        for (i, &a) in den.iter().enumerate() {
            rem[k + i] -= c * a;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    quot
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_ordering(self) -> Ordering {
        match self {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }
}

/// A closed rational interval certified to contain a real number.
#[derive(Debug, Clone, PartialEq)]
pub struct Enclosure {
    pub lower: BigRational,
    pub upper: BigRational,
}

impl Enclosure {
    pub fn contains(&self, other: &Enclosure) -> bool {
        self.lower <= other.lower && other.upper <= self.upper
    }
}

/// An element of the real subfield of `Q(ζ_N)`, stored as
/// `(Σ num[k] ζ^k) / den` with `deg < φ(N)`, `den > 0` and
/// `gcd(num, den) = 1`. The representative is canonical, so structural
/// equality is equality of numbers.
#[derive(Clone)]
pub struct AlgebraicReal {
    field: Arc<CyclotomicField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for AlgebraicReal {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.den == other.den && self.num == other.num
    }
}

impl Eq for AlgebraicReal {}

impl fmt::Debug for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (~{:.6})", self, self.to_f64())
    }
}

impl fmt::Display for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .num
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => c.to_string(),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{k}"),
            })
            .collect();
        let body = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        };
        if self.den.is_one() {
            f.write_str(&body)
        } else {
            write!(f, "({body})/{}", self.den)
        }
    }
}

impl AlgebraicReal {
    fn from_parts(field: &Arc<CyclotomicField>, num: Vec<BigInt>, den: BigInt) -> AlgebraicReal {
        let mut x = AlgebraicReal {
            field: field.clone(),
            num,
            den,
        };
        x.normalize();
        x
    }

    pub fn zero(field: &Arc<CyclotomicField>) -> AlgebraicReal {
        AlgebraicReal {
            field: field.clone(),
            num: vec![BigInt::zero(); field.degree],
            den: BigInt::one(),
        }
    }

    pub fn from_integer(field: &Arc<CyclotomicField>, value: i64) -> AlgebraicReal {
        AlgebraicReal::from_ratio(field, value, 1)
    }

    pub fn one(field: &Arc<CyclotomicField>) -> AlgebraicReal {
        AlgebraicReal::from_integer(field, 1)
    }

    pub fn from_ratio(field: &Arc<CyclotomicField>, numer: i64, denom: i64) -> AlgebraicReal {
        assert!(denom != 0, "zero denominator");
        let mut num = vec![BigInt::zero(); field.degree];
        num[0] = BigInt::from(numer);
        AlgebraicReal::from_parts(field, num, BigInt::from(denom))
    }

    /// `cos(2πk/N)` as `(ζ^k + ζ^{-k}) / 2`.
    pub fn cos_two_pi(field: &Arc<CyclotomicField>, k: i64) -> AlgebraicReal {
        let a = field.monomial(k);
        let b = field.monomial(-k);
        let num = a.into_iter().zip(b).map(|(x, y)| x + y).collect();
        AlgebraicReal::from_parts(field, num, BigInt::from(2))
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    /// Numerator coefficients in the power basis of `ζ`.
    pub fn numerator(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for c in &mut self.num {
                *c = -std::mem::take(c);
            }
        }
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                return;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            self.den /= &g;
            for c in &mut self.num {
                *c /= &g;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.is_rational() && self.num[0].is_one()
    }

    /// True when only the constant coefficient is nonzero.
    pub fn is_rational(&self) -> bool {
        self.num.iter().skip(1).all(Zero::is_zero)
    }

    fn check_field(&self, other: &AlgebraicReal) {
        assert_eq!(
            self.field.order, other.field.order,
            "operands live in different cyclotomic fields"
        );
    }

    /// Multiplies by an integer.
    pub fn scale(&self, k: i64) -> AlgebraicReal {
        let k = BigInt::from(k);
        let num = self.num.iter().map(|c| c * &k).collect();
        AlgebraicReal::from_parts(&self.field, num, self.den.clone())
    }

    /// Image under `ζ ↦ ζ^{-1}`; equals `self` for real elements.
    pub fn conjugate(&self) -> AlgebraicReal {
        let mut acc = vec![BigInt::zero(); self.field.degree];
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (a, m) in acc.iter_mut().zip(self.field.monomial(-(k as i64))) {
                *a += c * m;
            }
        }
        AlgebraicReal::from_parts(&self.field, acc, self.den.clone())
    }

    pub fn is_real(&self) -> bool {
        self.conjugate() == *self
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<AlgebraicReal> {
        if self.is_zero() {
            return None;
        }
        let d = self.field.degree;
        if self.is_rational() {
            let mut num = vec![BigInt::zero(); d];
            num[0] = self.den.clone();
            return Some(AlgebraicReal::from_parts(&self.field, num, self.num[0].clone()));
        }
        // Extended Euclid in Q[x]: s * num ≡ c (mod Φ_N) with c constant.
        let modulus: Vec<BigRational> = self
            .field
            .modulus
            .iter()
            .map(|&c| BigRational::from_integer(c.into()))
            .collect();
        let a: Vec<BigRational> = self.num.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let (mut r0, mut r1) = (trim(modulus), trim(a));
        let (mut s0, mut s1) = (Vec::new(), vec![BigRational::one()]);
        while r1.len() > 1 {
            let (q, r) = poly_divmod(&r0, &r1);
            let next = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, next);
        }
        let c = r1.first()?.clone();
        let lcm = s1.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let mut num: Vec<BigInt> = s1.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
        if num.len() > d {
            self.field.reduce(&mut num);
        }
        num.resize(d, BigInt::zero());
        // 1/self = den * s / c, with s = num / lcm.
        let scale = c * BigRational::from_integer(lcm);
        let factor = BigRational::from_integer(self.den.clone()) / scale;
        let num = num.into_iter().map(|x| x * factor.numer()).collect();
        Some(AlgebraicReal::from_parts(&self.field, num, factor.denom().clone()))
    }

    pub fn checked_div(&self, other: &AlgebraicReal) -> Option<AlgebraicReal> {
        Some(self * &other.inverse()?)
    }

    /// Certified enclosure at the given binary precision.
    pub fn enclosure(&self, precision: u32) -> Enclosure {
        let local;
        let table = if precision == self.field.cosines.precision {
            &self.field.cosines
        } else {
            local = CosineTable::new(self.field.order, self.field.degree, precision);
            &local
        };
        let (s, b) = self.evaluate(table);
        let scale = &self.den << precision;
        Enclosure {
            lower: BigRational::new(&s - &b, scale.clone()),
            upper: BigRational::new(s + b, scale),
        }
    }

    /// `(Σ num_k · cos_k, error bound)` in units of `2^-precision / den`.
    fn evaluate(&self, table: &CosineTable) -> (BigInt, BigInt) {
        let mut sum = BigInt::zero();
        let mut weight = BigInt::zero();
        for (c, v) in self.num.iter().zip(&table.values) {
            if c.is_zero() {
                continue;
            }
            sum += c * v;
            weight += c.abs();
        }
        (sum, weight * BigInt::from(table.error))
    }

    /// Exact sign: zero is decided on the canonical representative, a
    /// nonzero sign by interval evaluation with doubling precision.
    pub fn sign(&self) -> Sign {
        if self.is_zero() {
            return Sign::Zero;
        }
        if self.is_rational() {
            return if self.num[0].is_positive() {
                Sign::Positive
            } else {
                Sign::Negative
            };
        }
        let mut precision = self.field.cosines.precision;
        let mut local: Option<CosineTable> = None;
        loop {
            let table = local.as_ref().unwrap_or(&self.field.cosines);
            let (s, b) = self.evaluate(table);
            if s > b {
                return Sign::Positive;
            }
            if -&s > b {
                return Sign::Negative;
            }
            precision *= 2;
            local = Some(CosineTable::new(self.field.order, self.field.degree, precision));
        }
    }

    pub fn to_f64(&self) -> f64 {
        let mut v = 0.0;
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let angle = 2.0 * std::f64::consts::PI * k as f64 / self.field.order as f64;
            v += c.to_f64().unwrap_or(f64::NAN) * angle.cos();
        }
        v / self.den.to_f64().unwrap_or(f64::NAN)
    }
}

pub fn sign_of(x: &AlgebraicReal) -> Sign {
    x.sign()
}

/// `cos(π/m)` in `field`; `m = ∞` gives the limit value 1.
pub fn cos_pi_over(field: &Arc<CyclotomicField>, m: Order) -> Result<AlgebraicReal> {
    match m {
        Order::Infinite => Ok(AlgebraicReal::one(field)),
        Order::Finite(0) | Order::Finite(1) => Err(Error::CosineOfOrderOne),
        Order::Finite(m) => {
            let twice = 2 * m as u64;
            if !field.order.is_multiple_of(twice) {
                return Err(Error::NotInField {
                    m,
                    field_order: field.order,
                });
            }
            Ok(AlgebraicReal::cos_two_pi(field, (field.order / twice) as i64))
        }
    }
}

impl Add for &AlgebraicReal {
    type Output = AlgebraicReal;
    fn add(self, rhs: &AlgebraicReal) -> AlgebraicReal {
        self.check_field(rhs);
        if self.den == rhs.den {
            let num = self.num.iter().zip(&rhs.num).map(|(a, b)| a + b).collect();
            return AlgebraicReal::from_parts(&self.field, num, self.den.clone());
        }
        let num = self
            .num
            .iter()
            .zip(&rhs.num)
            .map(|(a, b)| a * &rhs.den + b * &self.den)
            .collect();
        AlgebraicReal::from_parts(&self.field, num, &self.den * &rhs.den)
    }
}

impl Neg for &AlgebraicReal {
    type Output = AlgebraicReal;
    fn neg(self) -> AlgebraicReal {
        AlgebraicReal {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Sub for &AlgebraicReal {
    type Output = AlgebraicReal;
    fn sub(self, rhs: &AlgebraicReal) -> AlgebraicReal {
        self.check_field(rhs);
        if self.den == rhs.den {
            let num = self.num.iter().zip(&rhs.num).map(|(a, b)| a - b).collect();
            return AlgebraicReal::from_parts(&self.field, num, self.den.clone());
        }
        let num = self
            .num
            .iter()
            .zip(&rhs.num)
            .map(|(a, b)| a * &rhs.den - b * &self.den)
            .collect();
        AlgebraicReal::from_parts(&self.field, num, &self.den * &rhs.den)
    }
}

impl Mul for &AlgebraicReal {
    type Output = AlgebraicReal;
    fn mul(self, rhs: &AlgebraicReal) -> AlgebraicReal {
        self.check_field(rhs);
        let field = &self.field;
        let d = field.degree;
        if self.is_zero() || rhs.is_zero() {
            return AlgebraicReal::zero(field);
        }
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        field.reduce(&mut prod);
        AlgebraicReal::from_parts(field, prod, &self.den * &rhs.den)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for AlgebraicReal {
            type Output = AlgebraicReal;
            fn $method(self, rhs: AlgebraicReal) -> AlgebraicReal {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for AlgebraicReal {
    type Output = AlgebraicReal;
    fn neg(self) -> AlgebraicReal {
        -&self
    }
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let zero = BigRational::zero();
    trim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
            .collect(),
    )
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + db] / &lead;
        if c.is_zero() {
            continue;
        }
        for (i, y) in b.iter().enumerate() {
            rem[k + i] -= &c * y;
        }
        quot[k] = c;
    }
    rem.truncate(db);
    (trim(quot), trim(rem))
}
