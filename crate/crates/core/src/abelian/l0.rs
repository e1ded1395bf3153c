//! The group L0(Ab): formal integer sums of `{Z}` and `{Z/p^a}`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use super::fg::FGAbelian;
use crate::group::is_prime;

/// A basis label of L0(Ab). Torsion labels sort by the prime power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum L0Label {
    Z,
    Torsion { q: u64, p: u64 },
}

impl L0Label {
    /// `{Z/q}` for a prime power `q`; `None` otherwise.
    pub fn torsion(q: u64) -> Option<Self> {
        prime_power_base(q).map(|p| L0Label::Torsion { q, p })
    }
}

impl fmt::Display for L0Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            L0Label::Z => write!(f, "Z"),
            L0Label::Torsion { q, .. } => write!(f, "Z/{q}"),
        }
    }
}

fn prime_power_base(q: u64) -> Option<u64> {
    if q < 2 {
        return None;
    }
    let p = (2..)
        .take_while(|d| d * d <= q)
        .find(|d| q.is_multiple_of(*d))
        .unwrap_or(q);
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
    }
    (r == 1 && is_prime(p)).then_some(p)
}

/// Element of L0(Ab). Zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct L0AbElement {
    coefficients: BTreeMap<L0Label, i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum L0ParseError {
    #[error("unexpected `{found}` at byte {position}")]
    Unexpected { position: usize, found: String },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("empty expression")]
    Empty,
}

impl L0AbElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn z() -> Self {
        Self::basis(L0Label::Z)
    }

    pub fn basis(label: L0Label) -> Self {
        let mut e = Self::zero();
        e.add_term(label, 1);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn coefficient(&self, label: L0Label) -> i64 {
        self.coefficients.get(&label).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (L0Label, i64)> + '_ {
        self.coefficients.iter().map(|(l, c)| (*l, *c))
    }

    pub fn add_term(&mut self, label: L0Label, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.coefficients.entry(label).or_insert(0);
        *entry = entry.checked_add(c).expect("L0 coefficient overflow");
        if *entry == 0 {
            self.coefficients.remove(&label);
        }
    }

    /// The class of an actual group: all coefficients nonnegative.
    pub fn is_effective(&self) -> bool {
        self.coefficients.values().all(|&c| c > 0)
    }

    /// Inverse of `l0_class_of` on effective elements.
    pub fn to_group(&self) -> Option<FGAbelian> {
        if !self.is_effective() {
            return None;
        }
        let mut torsion = Vec::new();
        let mut rank = 0;
        for (label, c) in self.terms() {
            match label {
                L0Label::Z => rank = c as usize,
                L0Label::Torsion { q, .. } => torsion.extend(std::iter::repeat_n(q, c as usize)),
            }
        }
        Some(FGAbelian::new(rank, &torsion))
    }
}

/// `rank {Z} + sum of the prime-power parts of every invariant factor`.
pub fn l0_class_of(a: &FGAbelian) -> L0AbElement {
    let mut e = L0AbElement::zero();
    e.add_term(L0Label::Z, a.rank() as i64);
    for d in a.invariant_factors() {
        for (p, k) in factorize(d) {
            let q = p.checked_pow(k).expect("prime power fits in u64");
            e.add_term(L0Label::Torsion { q, p }, 1);
        }
    }
    e
}

/// Trial-division factorization into `(prime, exponent)` pairs.
fn factorize(n: &BigUint) -> Vec<(u64, u32)> {
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut d = 2u64;
    while !n.is_one() {
        if BigUint::from(d) * BigUint::from(d) > n {
            let p = n.to_u64().expect("prime factor fits in u64");
            out.push((p, 1));
            break;
        }
        let mut k = 0;
        loop {
            let (q, r) = n.div_rem(&BigUint::from(d));
            if !r.is_zero() {
                break;
            }
            n = q;
            k += 1;
        }
        if k > 0 {
            out.push((d, k));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    out
}

impl fmt::Display for L0AbElement {
    /// Signed sum such as `Z + Z/2 + Z/3`, `2Z - Z/4`, or `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (label, c)) in self.terms().enumerate() {
            let magnitude = c.unsigned_abs();
            match (i, c < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if magnitude != 1 {
                write!(f, "{magnitude}")?;
            }
            write!(f, "{label}")?;
        }
        Ok(())
    }
}

impl FromStr for L0AbElement {
    type Err = L0ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        let mut pos = 0;
        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        let number = |pos: &mut usize| -> Option<u64> {
            let start = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            s[start..*pos].parse().ok()
        };
        let unexpected = |pos: usize| L0ParseError::Unexpected {
            position: pos,
            found: s[pos..]
                .chars()
                .next()
                .map_or("end of input".to_string(), |c| c.to_string()),
        };

        let mut out = L0AbElement::zero();
        let mut first = true;
        skip_ws(&mut pos);
        if pos == bytes.len() {
            return Err(L0ParseError::Empty);
        }
        loop {
            skip_ws(&mut pos);
            let mut sign = 1i64;
            if pos < bytes.len() && (bytes[pos] == b'+' || bytes[pos] == b'-') {
                if bytes[pos] == b'-' {
                    sign = -1;
                }
                pos += 1;
                skip_ws(&mut pos);
            } else if !first {
                return Err(unexpected(pos));
            }
            first = false;
            let coeff = number(&mut pos);
            skip_ws(&mut pos);
            if pos < bytes.len() && bytes[pos] == b'Z' {
                pos += 1;
                let label = if pos < bytes.len() && bytes[pos] == b'/' {
                    pos += 1;
                    let q = number(&mut pos).ok_or_else(|| unexpected(pos))?;
                    L0Label::torsion(q).ok_or(L0ParseError::NotPrimePower(q))?
                } else {
                    L0Label::Z
                };
                let c = coeff.unwrap_or(1) as i64;
                out.add_term(label, sign * c);
            } else if coeff == Some(0) {
                // literal 0
            } else {
                return Err(unexpected(pos));
            }
            skip_ws(&mut pos);
            if pos == bytes.len() {
                return Ok(out);
            }
        }
    }
}

impl Add for L0AbElement {
    type Output = L0AbElement;
    fn add(mut self, rhs: L0AbElement) -> L0AbElement {
        self += rhs;
        self
    }
}

impl<'a> Add<&'a L0AbElement> for &'a L0AbElement {
    type Output = L0AbElement;
    fn add(self, rhs: &L0AbElement) -> L0AbElement {
        let mut out = self.clone();
        out += rhs.clone();
        out
    }
}

impl AddAssign for L0AbElement {
    fn add_assign(&mut self, rhs: L0AbElement) {
        for (l, c) in rhs.coefficients {
            self.add_term(l, c);
        }
    }
}

impl Neg for L0AbElement {
    type Output = L0AbElement;
    fn neg(self) -> L0AbElement {
        self * -1
    }
}

impl Sub for L0AbElement {
    type Output = L0AbElement;
    fn sub(self, rhs: L0AbElement) -> L0AbElement {
        self + (-rhs)
    }
}

impl<'a> Sub<&'a L0AbElement> for &'a L0AbElement {
    type Output = L0AbElement;
    fn sub(self, rhs: &L0AbElement) -> L0AbElement {
        self.clone() - rhs.clone()
    }
}

impl Mul<i64> for L0AbElement {
    type Output = L0AbElement;
    fn mul(self, k: i64) -> L0AbElement {
        let mut out = L0AbElement::zero();
        for (l, c) in self.coefficients {
            out.add_term(l, c.checked_mul(k).expect("L0 coefficient overflow"));
        }
        out
    }
}

impl std::iter::Sum for L0AbElement {
    fn sum<I: Iterator<Item = L0AbElement>>(iter: I) -> Self {
        iter.fold(L0AbElement::zero(), Add::add)
    }
}
