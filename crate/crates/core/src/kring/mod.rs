//! Symbolic arithmetic in the Grothendieck ring of varieties, localized at `L` and
//! `L^n - 1`, and completed along the dimension filtration.
//!
//! An element is a finite sum `sum c * {X} * L^e` together with a precision `tau`:
//! the element is only known modulo `Fil^tau`, the span of classes of virtual
//! dimension `dim X + e <= tau`. Exact elements have no precision.

mod expr;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::hcoh::CohomologyTable;

pub use expr::{parse_kring_expr, parse_kring_expr_with, SymbolTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KError {
    #[error("not a unit of the form +-L^a (L^n1 - 1)...(L^nk - 1): {0}")]
    NotAUnit(String),
    #[error("series expansion needs a finite precision")]
    NeedsPrecision,
    #[error("sequence does not converge at step {index}")]
    NotConverging { index: usize },
    #[error("empty sequence")]
    EmptySequence,
    #[error("invalid symbol name `{0}`")]
    BadSymbolName(String),
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("integer {0} out of range")]
    OutOfRange(String),
}

/// A named variety class. Symbols are opaque: no relations are applied between them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorSymbol {
    name: String,
    dimension: u32,
    smooth_proper: bool,
    table: Option<CohomologyTable>,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !expr::RESERVED.contains(&name)
}

impl GeneratorSymbol {
    pub fn new(name: &str, dimension: u32, smooth_proper: bool) -> Result<Arc<Self>, KError> {
        if !valid_name(name) {
            return Err(KError::BadSymbolName(name.to_string()));
        }
        Ok(Arc::new(GeneratorSymbol {
            name: name.to_string(),
            dimension,
            smooth_proper,
            table: None,
        }))
    }

    /// A smooth proper variety with known integral cohomology.
    pub fn with_table(name: &str, table: CohomologyTable) -> Result<Arc<Self>, KError> {
        if !valid_name(name) {
            return Err(KError::BadSymbolName(name.to_string()));
        }
        Ok(Arc::new(GeneratorSymbol {
            name: name.to_string(),
            dimension: table.dimension(),
            smooth_proper: true,
            table: Some(table),
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn smooth_proper(&self) -> bool {
        self.smooth_proper
    }

    pub fn table(&self) -> Option<&CohomologyTable> {
        self.table.as_ref()
    }
}

/// A product of symbols, sorted; the empty product is the point.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<Arc<GeneratorSymbol>>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[Arc<GeneratorSymbol>] {
        &self.0
    }

    pub fn dimension(&self) -> i64 {
        self.0.iter().map(|s| s.dimension as i64).sum()
    }

    fn times(&self, other: &Monomial) -> Monomial {
        let mut f = self.0.clone();
        f.extend(other.0.iter().cloned());
        f.sort();
        Monomial(f)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let names: Vec<&str> = self.0.iter().map(|s| s.name.as_str()).collect();
        write!(f, "{}", names.join("*"))
    }
}

/// `finite sum + O(Fil^tau)`; `precision == None` means exact.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KElement {
    terms: BTreeMap<(Monomial, i64), i128>,
    precision: Option<i64>,
}

fn max_precision(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) | (None, x) => x,
    }
}

impl KElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    pub fn integer(c: i128) -> Self {
        Self::from_terms([(Monomial::unit(), 0, c)], None)
    }

    /// `L^e`.
    pub fn lefschetz(e: i64) -> Self {
        Self::from_terms([(Monomial::unit(), e, 1)], None)
    }

    pub fn symbol(s: &Arc<GeneratorSymbol>) -> Self {
        Self::from_terms([(Monomial(vec![s.clone()]), 0, 1)], None)
    }

    /// `{P^n} = 1 + L + ... + L^n`.
    pub fn projective_space(n: u32) -> Self {
        Self::from_terms((0..=n as i64).map(|e| (Monomial::unit(), e, 1)), None)
    }

    /// Merges coefficients, drops zeros, absorbs terms of virtual dimension `<= tau`.
    pub fn from_terms(
        terms: impl IntoIterator<Item = (Monomial, i64, i128)>,
        precision: Option<i64>,
    ) -> Self {
        let mut out = KElement {
            terms: BTreeMap::new(),
            precision,
        };
        for (m, e, c) in terms {
            out.add_term(m, e, c);
        }
        out
    }

    fn add_term(&mut self, m: Monomial, e: i64, c: i128) {
        if c == 0 || self.precision.is_some_and(|t| m.dimension() + e <= t) {
            return;
        }
        let key = (m, e);
        let entry = self.terms.entry(key.clone()).or_insert(0);
        *entry = entry.checked_add(c).expect("K coefficient overflow");
        if *entry == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn precision(&self) -> Option<i64> {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_none()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(monomial, exponent of L, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i64, i128)> {
        self.terms.iter().map(|((m, e), c)| (m, *e, *c))
    }

    pub fn coefficient(&self, m: &Monomial, e: i64) -> i128 {
        self.terms.get(&(m.clone(), e)).copied().unwrap_or(0)
    }

    /// Largest virtual dimension of a term; `None` stands for minus infinity.
    pub fn fil_degree(&self) -> Option<i64> {
        self.terms.keys().map(|(m, e)| m.dimension() + e).max()
    }

    /// The image modulo `Fil^tau` (never finer than the current precision).
    pub fn truncate(&self, tau: i64) -> Self {
        let precision = max_precision(self.precision, Some(tau));
        Self::from_terms(self.terms().map(|(m, e, c)| (m.clone(), e, c)), precision)
    }

    pub fn add(&self, other: &KElement) -> Self {
        let precision = max_precision(self.precision, other.precision);
        Self::from_terms(
            self.terms()
                .chain(other.terms())
                .map(|(m, e, c)| (m.clone(), e, c)),
            precision,
        )
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn sub(&self, other: &KElement) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i128) -> Self {
        let terms = self.terms().map(|(m, e, c)| {
            (
                m.clone(),
                e,
                c.checked_mul(k).expect("K coefficient overflow"),
            )
        });
        Self::from_terms(terms, self.precision)
    }

    /// Termwise product. The unknown tails contribute `O(Fil^(tau_x + d_y))`,
    /// `O(Fil^(tau_y + d_x))` and `O(Fil^(tau_x + tau_y))`.
    pub fn mul(&self, other: &KElement) -> Self {
        let add = |a: Option<i64>, b: Option<i64>| a.zip(b).map(|(a, b)| a + b);
        let dx = self.fil_degree();
        let dy = other.fil_degree();
        let precision = [
            add(self.precision, dy),
            add(other.precision, dx),
            add(self.precision, other.precision),
        ]
        .into_iter()
        .fold(None, max_precision);
        let mut out = KElement {
            terms: BTreeMap::new(),
            precision,
        };
        for (ma, ea, ca) in self.terms() {
            for (mb, eb, cb) in other.terms() {
                out.add_term(
                    ma.times(mb),
                    ea + eb,
                    ca.checked_mul(cb).expect("K coefficient overflow"),
                );
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Whether `self - other` vanishes modulo `Fil^tau`.
    pub fn agrees_modulo(&self, other: &KElement, tau: i64) -> bool {
        self.sub(other).truncate(tau).is_zero()
    }

    /// Laurent polynomial in `L` if every term is a pure power of `L`.
    fn lefschetz_polynomial(&self) -> Option<BTreeMap<i64, i128>> {
        self.terms()
            .map(|(m, e, c)| m.is_unit().then_some((e, c)))
            .collect()
    }

    /// Value at `L = q` for an exact polynomial in `L` with nonnegative exponents.
    pub fn evaluate_lefschetz(&self, q: i128) -> Option<i128> {
        if !self.is_exact() {
            return None;
        }
        let poly = self.lefschetz_polynomial()?;
        poly.into_iter().try_fold(0i128, |acc, (e, c)| {
            let e = u32::try_from(e).ok()?;
            acc.checked_add(c.checked_mul(q.checked_pow(e)?)?)
        })
    }
}

impl fmt::Display for KElement {
    /// Renders in the expression grammar, highest virtual dimension first,
    /// e.g. `L^2 - 3*X*L^-1 + 1 mod Fil(-4)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<_> = self.terms().collect();
        terms.sort_by(
            |a, b| match (b.0.dimension() + b.1).cmp(&(a.0.dimension() + a.1)) {
                Ordering::Equal => a.0.cmp(b.0).then(b.1.cmp(&a.1)),
                o => o,
            },
        );
        if terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, (m, e, c)) in terms.into_iter().enumerate() {
            match (i, c < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            let magnitude = c.unsigned_abs();
            if magnitude != 1 || (m.is_unit() && e == 0) {
                factors.push(magnitude.to_string());
            }
            if !m.is_unit() {
                factors.push(m.to_string());
            }
            match e {
                0 => {}
                1 => factors.push("L".into()),
                e => factors.push(format!("L^{e}")),
            }
            write!(f, "{}", factors.join("*"))?;
        }
        if let Some(t) = self.precision {
            write!(f, " mod Fil({t})")?;
        }
        Ok(())
    }
}

/// Shorthand for `KElement::from_terms`.
pub fn k_normalize(
    terms: impl IntoIterator<Item = (Monomial, i64, i128)>,
    precision: Option<i64>,
) -> KElement {
    KElement::from_terms(terms, precision)
}

pub fn k_mul(x: &KElement, y: &KElement) -> KElement {
    x.mul(y)
}

/// Splits an exact Laurent polynomial as `s * L^low * (1 - L^n1) ... (1 - L^nk)`.
fn unit_factors(x: &KElement) -> Result<(i128, i64, Vec<i64>), KError> {
    let fail = || KError::NotAUnit(x.to_string());
    if !x.is_exact() || x.is_zero() {
        return Err(fail());
    }
    let poly = x.lefschetz_polynomial().ok_or_else(fail)?;
    let low = *poly.keys().next().expect("nonzero");
    let high = *poly.keys().next_back().expect("nonzero");
    let width = usize::try_from(high - low).map_err(|_| fail())?;
    let mut q = vec![0i128; width + 1];
    for (e, c) in poly {
        q[(e - low) as usize] = c;
    }
    let s = q[0];
    if s != 1 && s != -1 {
        return Err(fail());
    }
    for c in q.iter_mut() {
        *c *= s;
    }
    let mut factors = Vec::new();
    while let Some(k) = (1..q.len()).find(|&i| q[i] != 0) {
        if q[k] > 0 {
            return Err(fail());
        }
        // divide by (1 - L^k)
        for i in k..q.len() {
            q[i] += q[i - k];
        }
        if q[q.len() - k..].iter().any(|&c| c != 0) {
            return Err(fail());
        }
        q.truncate(q.len() - k);
        factors.push(k as i64);
    }
    Ok((s, low, factors))
}

/// Inverse of `+-L^a (L^n1 - 1) ... (L^nk - 1)` modulo `Fil^tau`, via
/// `L^n - 1 = L^n (1 - L^-n)` and `(1 - L^-n)^-1 = 1 + L^-n + L^-2n + ...`.
pub fn k_invert_unit(x: &KElement, tau: i64) -> Result<KElement, KError> {
    let (s, low, factors) = unit_factors(x)?;
    // x = s * (-1)^r * L^deg * prod (1 - L^-n)
    let deg = low + factors.iter().sum::<i64>();
    let sign = if factors.len() % 2 == 0 { s } else { -s };
    let top = -deg;
    let mut out = KElement {
        terms: BTreeMap::new(),
        precision: Some(tau),
    };
    if top <= tau {
        return Ok(out);
    }
    // coefficients of prod (1 - t^n)^-1 in t = L^-1, up to t^(top - tau - 1)
    let len = (top - tau) as usize;
    let mut series = vec![0i128; len];
    series[0] = 1;
    for &n in &factors {
        let n = n as usize;
        for i in n..len {
            series[i] = series[i]
                .checked_add(series[i - n])
                .expect("K coefficient overflow");
        }
    }
    for (i, c) in series.into_iter().enumerate() {
        out.add_term(Monomial::unit(), top - i as i64, sign * c);
    }
    Ok(out)
}

/// `{GL_n} = prod_{i < n} (L^n - L^i)`.
pub fn class_gl(n: u32) -> KElement {
    assert!(n >= 1, "GL_n needs n >= 1");
    let nn = n as i64;
    (0..nn).fold(KElement::one(), |acc, i| {
        acc.mul(&KElement::lefschetz(nn).sub(&KElement::lefschetz(i)))
    })
}

/// `{BW} = {W}^-1` for a special group `W`, times `{W/H}` when a quotient class is given,
/// so that `{BH} = {W/H} {BW}`. The result is known modulo `Fil^tau`.
pub fn class_b_subgroup(
    w_class: &KElement,
    quotient_class: Option<&KElement>,
    tau: i64,
) -> Result<KElement, KError> {
    match quotient_class {
        None => k_invert_unit(w_class, tau),
        Some(q) => {
            if !q.is_exact() {
                return Err(KError::NotAUnit(format!("quotient class {q} is not exact")));
            }
            let Some(d) = q.fil_degree() else {
                return Ok(KElement::zero().truncate(tau));
            };
            let inverse = k_invert_unit(w_class, tau - d)?;
            Ok(q.mul(&inverse).truncate(tau))
        }
    }
}

/// `({[V^m/G]}, {[P(V)/G]}) = (L^(nm) {BG}, (1 + L + ... + L^(n-1)) {BG})`.
pub fn quotient_stack_classes(bg: &KElement, n: u32, m: u32) -> (KElement, KElement) {
    assert!(n >= 1 && m >= 1, "n, m >= 1");
    let affine = KElement::lefschetz(n as i64 * m as i64).mul(bg);
    let projective = KElement::projective_space(n - 1).mul(bg);
    (affine, projective)
}

pub fn fil_degree(x: &KElement) -> Option<i64> {
    x.fil_degree()
}

/// Limit of a sequence whose consecutive differences have strictly decreasing
/// filtration degree (repeated zero differences allowed).
pub fn limit_of_sequence(seq: &[KElement]) -> Result<KElement, KError> {
    let last = seq.last().ok_or(KError::EmptySequence)?;
    let mut previous: Option<Option<i64>> = None;
    for (index, pair) in seq.windows(2).enumerate() {
        let [a, b] = pair else { unreachable!() };
        if let (Some(ta), Some(tb)) = (a.precision, b.precision) {
            if tb > ta {
                return Err(KError::NotConverging { index });
            }
        } else if a.precision.is_none() && b.precision.is_some() {
            return Err(KError::NotConverging { index });
        }
        let d = b.sub(a).fil_degree();
        if let Some(p) = previous {
            let decreasing = match (p, d) {
                (None, None) => true,
                (Some(x), Some(y)) => y < x,
                (Some(_), None) => true,
                (None, Some(_)) => false,
            };
            if !decreasing {
                return Err(KError::NotConverging { index });
            }
        }
        previous = Some(d);
    }
    Ok(match previous.flatten() {
        Some(d) => last.truncate(d),
        None => last.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(e: i64) -> KElement {
        KElement::lefschetz(e)
    }

    fn series(exps: &[i64], tau: i64) -> KElement {
        KElement::from_terms(exps.iter().map(|&e| (Monomial::unit(), e, 1)), Some(tau))
    }

    #[test]
    fn normalization() {
        let x = KElement::one().add(&l(1)).add(&l(1));
        assert_eq!(x.to_string(), "2*L + 1");
        assert!(KElement::from_terms([(Monomial::unit(), -5, 1)], Some(-3)).is_zero());
        assert_eq!(KElement::projective_space(2).to_string(), "L^2 + L + 1");
    }

    #[test]
    fn products() {
        assert_eq!(l(2).mul(&l(-5)), l(-3));
        assert_eq!(
            KElement::one().add(&l(1)).mul(&KElement::one().sub(&l(1))),
            KElement::one().sub(&l(2))
        );
        let approx = KElement::one().truncate(-3);
        let p = approx.mul(&l(2));
        assert_eq!(p, l(2).truncate(-1));
    }

    #[test]
    fn inverses() {
        let one_minus = KElement::one().sub(&l(-1));
        assert_eq!(
            k_invert_unit(&one_minus, -4).unwrap(),
            series(&[0, -1, -2, -3], -4)
        );
        assert_eq!(
            k_invert_unit(&l(1).sub(&KElement::one()), -4).unwrap(),
            series(&[-1, -2, -3], -4)
        );
        assert_eq!(
            k_invert_unit(&l(2).sub(&KElement::one()), -5).unwrap(),
            series(&[-2, -4], -5)
        );
        assert!(matches!(
            k_invert_unit(&l(1).add(&KElement::one()), -4),
            Err(KError::NotAUnit(_))
        ));
        assert!(matches!(
            k_invert_unit(&KElement::integer(2), -4),
            Err(KError::NotAUnit(_))
        ));
        assert_eq!(
            k_invert_unit(&l(3).neg(), -5).unwrap(),
            l(-3).neg().truncate(-5)
        );
    }

    #[test]
    fn general_linear_groups() {
        assert_eq!(class_gl(1), l(1).sub(&KElement::one()));
        assert_eq!(class_gl(2).to_string(), "L^4 - L^3 - L^2 + L");
        assert_eq!(class_gl(2).evaluate_lefschetz(2), Some(6));
        assert_eq!(class_gl(2).evaluate_lefschetz(3), Some(48));
        assert_eq!(class_gl(3).evaluate_lefschetz(2), Some(168));
    }

    #[test]
    fn classifying_stacks() {
        assert_eq!(
            class_b_subgroup(&class_gl(1), None, -4).unwrap(),
            series(&[-1, -2, -3], -4)
        );
        let q = class_gl(1);
        assert_eq!(
            class_b_subgroup(&class_gl(1), Some(&q), -7).unwrap(),
            KElement::one().truncate(-7)
        );
        let g = class_gl(2);
        let back = g.mul(&class_b_subgroup(&g, None, -20).unwrap());
        assert_eq!(back, KElement::one().truncate(-16));
    }

    #[test]
    fn quotient_stacks() {
        assert_eq!(
            quotient_stack_classes(&KElement::one(), 1, 3),
            (l(3), KElement::one())
        );
        assert_eq!(
            quotient_stack_classes(&KElement::one(), 3, 1),
            (l(3), KElement::projective_space(2))
        );
    }

    #[test]
    fn filtration_degrees() {
        let p2 = GeneratorSymbol::new("P2", 2, true).unwrap();
        assert_eq!(KElement::symbol(&p2).mul(&l(-3)).fil_degree(), Some(-1));
        assert_eq!(KElement::one().fil_degree(), Some(0));
        assert_eq!(KElement::zero().fil_degree(), None);
    }

    #[test]
    fn limits() {
        let x = KElement::projective_space(1);
        assert_eq!(
            limit_of_sequence(&[x.clone(), x.clone(), x.clone()]).unwrap(),
            x
        );
        let partial =
            |n: i64| KElement::from_terms((0..=n).map(|j| (Monomial::unit(), -j, 1)), None);
        let lim = limit_of_sequence(&[partial(0), partial(1), partial(2)]).unwrap();
        assert_eq!(lim, series(&[0, -1], -2));
        assert_eq!(
            limit_of_sequence(&[KElement::zero(), l(-2), l(-2).add(&l(-1))]),
            Err(KError::NotConverging { index: 1 })
        );
        assert_eq!(limit_of_sequence(&[]), Err(KError::EmptySequence));
    }

    #[test]
    fn projective_space_matches_geometric_series() {
        for n in 0..5u32 {
            let lhs = KElement::projective_space(n);
            let num = l(n as i64 + 1).sub(&KElement::one());
            for tau in [-1, -3, -8] {
                let rhs = num.mul(&k_invert_unit(&class_gl(1), tau - n as i64 - 1).unwrap());
                assert!(
                    rhs.agrees_modulo(&lhs, rhs.precision().unwrap()),
                    "n={n} tau={tau}"
                );
                assert!(rhs.precision().unwrap() <= tau);
            }
        }
    }

    #[test]
    fn symbol_names() {
        assert!(GeneratorSymbol::new("X_1", 1, true).is_ok());
        assert!(GeneratorSymbol::new("1X", 1, true).is_err());
        assert!(GeneratorSymbol::new("L", 1, true).is_err());
    }
}
