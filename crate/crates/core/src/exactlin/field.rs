use std::fmt::{self, Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::FieldError;

/// Which ground field a problem lives over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FieldSpec {
    Rationals,
    PrimeField { characteristic: u32 },
}

impl FieldSpec {
    pub fn characteristic(&self) -> u32 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField { characteristic } => *characteristic,
        }
    }
}

impl Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField { characteristic } => write!(f, "F_{characteristic}"),
        }
    }
}

/// Exact field arithmetic. Elements are plain values; the field object
/// carries whatever runtime data (the characteristic) the operations need.
pub trait Field: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn from_ratio(&self, num: i64, den: i64) -> Result<Self::Elem, FieldError>;
    fn format(&self, a: &Self::Elem) -> String;

    /// Number of elements, when finite.
    fn order(&self) -> Option<u64>;

    /// The `index`-th element in a fixed enumeration `0, 1, ..., p-1`.
    /// Only meaningful for finite fields.
    fn element_at(&self, index: u64) -> Self::Elem;

    /// Inverse of [`Field::element_at`].
    fn index_of(&self, a: &Self::Elem) -> u64;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// `y += a * x`
    fn axpy(&self, y: &mut [Self::Elem], a: &Self::Elem, x: &[Self::Elem]) {
        debug_assert_eq!(y.len(), x.len());
        if self.is_zero(a) {
            return;
        }
        for (yi, xi) in y.iter_mut().zip(x) {
            if !self.is_zero(xi) {
                *yi = self.add(yi, &self.mul(a, xi));
            }
        }
    }

    fn zero_vec(&self, n: usize) -> Vec<Self::Elem> {
        vec![self.zero(); n]
    }

    fn unit_vec(&self, n: usize, i: usize) -> Vec<Self::Elem> {
        let mut v = self.zero_vec(n);
        v[i] = self.one();
        v
    }

    fn vec_add(&self, a: &[Self::Elem], b: &[Self::Elem]) -> Vec<Self::Elem> {
        a.iter().zip(b).map(|(x, y)| self.add(x, y)).collect()
    }

    fn vec_sub(&self, a: &[Self::Elem], b: &[Self::Elem]) -> Vec<Self::Elem> {
        a.iter().zip(b).map(|(x, y)| self.sub(x, y)).collect()
    }

    fn vec_scale(&self, c: &Self::Elem, a: &[Self::Elem]) -> Vec<Self::Elem> {
        a.iter().map(|x| self.mul(c, x)).collect()
    }

    fn vec_is_zero(&self, a: &[Self::Elem]) -> bool {
        a.iter().all(|x| self.is_zero(x))
    }

    fn format_vec(&self, a: &[Self::Elem]) -> String {
        let parts: Vec<String> = a.iter().map(|x| self.format(x)).collect();
        format!("[{}]", parts.join(","))
    }
}

/// The prime field F_p with `p < 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, FieldError> {
        if p >= (1 << 31) {
            return Err(FieldError::CharacteristicTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    fn reduce(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let n = n as u64;
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u32;

    fn spec(&self) -> FieldSpec {
        FieldSpec::PrimeField { characteristic: self.p }
    }
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + *b as u64;
        (s % self.p as u64) as u32
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + (self.p - *b) as u64;
        (s % self.p as u64) as u32
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - *a
        }
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(self.reduce(t0))
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn from_i64(&self, n: i64) -> u32 {
        self.reduce(n)
    }
    fn from_ratio(&self, num: i64, den: i64) -> Result<u32, FieldError> {
        let d = self.reduce(den);
        let inv = self.inv(&d).ok_or(FieldError::DivisionByZero)?;
        Ok(self.mul(&self.reduce(num), &inv))
    }
    fn format(&self, a: &u32) -> String {
        a.to_string()
    }
    fn order(&self) -> Option<u64> {
        Some(self.p as u64)
    }
    fn element_at(&self, index: u64) -> u32 {
        (index % self.p as u64) as u32
    }
    fn index_of(&self, a: &u32) -> u64 {
        *a as u64
    }
}

/// The rational numbers, with arbitrary precision numerators and denominators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_ratio(&self, num: i64, den: i64) -> Result<BigRational, FieldError> {
        if den == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
    fn format(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else if a.is_negative() {
            format!("-{}/{}", a.numer().abs(), a.denom())
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn order(&self) -> Option<u64> {
        None
    }
    fn element_at(&self, index: u64) -> BigRational {
        self.from_i64(index as i64)
    }
    fn index_of(&self, _a: &BigRational) -> u64 {
        panic!("the rationals have no finite enumeration")
    }
}
