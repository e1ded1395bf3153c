//! Ekedahl invariants `e_i(G)`: the fixed low-degree values, `e_2` from the
//! Bogomolov multiplier, evaluation from resolution data, the triviality catalog,
//! and the projective window solver.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian::{l0_class_of, pontryagin_dual, AbelianError, L0AbElement};
use crate::cohomology::{bogomolov_multiplier_with, CohomologyConfig, CohomologyError};
use crate::group::{Builtin, FiniteGroup, Origin};
use crate::hcoh::CohomologyTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EkedahlError {
    #[error("resolution of dimension {got} for n = {n}, m = {m} (expected {expected})")]
    MainDimension {
        n: u32,
        m: u32,
        got: u32,
        expected: u32,
    },
    #[error("extra table {index} has dimension {got}, must be below {bound}")]
    ExtraDimension { index: usize, got: u32, bound: u32 },
    #[error("n and m must be positive")]
    ZeroParameter,
    #[error("degree 2mn - i = {0} is negative")]
    DegreeOutOfRange(i64),
    #[error("window equation at k = {0} is violated")]
    Inconsistent(i64),
    #[error("window at k = {0} only involves negative indices but is nonzero")]
    NegativeIndexNonzero(i64),
    #[error("window width n must be at least 1")]
    ZeroWidth,
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
}

/// Smallest `m` with `floor(m / n) > i / 2`.
pub fn m_bound(i: u32, n: u32) -> u32 {
    n * (i / 2 + 1)
}

/// `{V^m / G} = {X} + sum n_j {X_j}` with `X` smooth proper of dimension `mn`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionData {
    n: u32,
    m: u32,
    main: CohomologyTable,
    extras: Vec<(i64, CohomologyTable)>,
}

impl ResolutionData {
    pub fn new(
        n: u32,
        m: u32,
        main: CohomologyTable,
        extras: Vec<(i64, CohomologyTable)>,
    ) -> Result<Self, EkedahlError> {
        if n == 0 || m == 0 {
            return Err(EkedahlError::ZeroParameter);
        }
        let expected = n * m;
        if main.dimension() != expected {
            return Err(EkedahlError::MainDimension {
                n,
                m,
                got: main.dimension(),
                expected,
            });
        }
        if let Some((index, (_, t))) = extras
            .iter()
            .enumerate()
            .find(|(_, (_, t))| t.dimension() >= expected)
        {
            return Err(EkedahlError::ExtraDimension {
                index,
                got: t.dimension(),
                bound: expected,
            });
        }
        Ok(ResolutionData { n, m, main, extras })
    }

    pub fn rep_dimension(&self) -> u32 {
        self.n
    }

    pub fn copies(&self) -> u32 {
        self.m
    }

    pub fn main(&self) -> &CohomologyTable {
        &self.main
    }

    pub fn extras(&self) -> &[(i64, CohomologyTable)] {
        &self.extras
    }
}

/// A value computed from resolution data, with the shortfall of `m` below `m_bound` if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionValue {
    pub value: L0AbElement,
    pub bound_gap: Option<u32>,
}

/// `{H^(2mn-i)(X)} + sum n_j {H^(2mn-i)(X_j)}`.
pub fn ekedahl_from_resolution(
    data: &ResolutionData,
    i: i64,
) -> Result<ResolutionValue, EkedahlError> {
    let degree = 2 * data.n as i64 * data.m as i64 - i;
    if degree < 0 {
        return Err(EkedahlError::DegreeOutOfRange(degree));
    }
    let mut value = l0_class_of(&data.main.get(degree));
    for (c, t) in &data.extras {
        value += l0_class_of(&t.get(degree)) * *c;
    }
    let bound_gap = u32::try_from(i)
        .ok()
        .map(|i| m_bound(i, data.n))
        .filter(|&b| b > data.m)
        .map(|b| b - data.m);
    Ok(ResolutionValue { value, bound_gap })
}

/// Known families of groups all of whose Ekedahl invariants vanish in nonzero degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CatalogEntry {
    /// symmetric groups
    Symmetric,
    /// subgroups of `GL_1`, in particular cyclic groups
    SubgroupOfGl1,
    /// subgroups of `GL_3(C)`
    SubgroupOfGl3,
    /// the Heisenberg group of order 125
    Heisenberg5,
}

impl CatalogEntry {
    /// Item number in the list of known trivial cases, `None` for the Heisenberg result.
    pub fn item(self) -> Option<u32> {
        match self {
            CatalogEntry::Symmetric => Some(1),
            CatalogEntry::SubgroupOfGl1 => Some(2),
            CatalogEntry::SubgroupOfGl3 => Some(5),
            CatalogEntry::Heisenberg5 => None,
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            CatalogEntry::Symmetric => "symmetric group",
            CatalogEntry::SubgroupOfGl1 => "subgroup of GL_1 (cyclic)",
            CatalogEntry::SubgroupOfGl3 => "subgroup of GL_3(C)",
            CatalogEntry::Heisenberg5 => "Heisenberg group of order 125",
        }
    }
}

impl fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.item() {
            Some(n) => write!(f, "item {n}: {}", self.description()),
            None => write!(f, "{}", self.description()),
        }
    }
}

/// Assertions the caller vouches for; nothing here is checked.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CatalogAssertions {
    pub gl3_embeddable: bool,
}

fn builtin_entry(b: &Builtin) -> Option<CatalogEntry> {
    match b {
        Builtin::Symmetric(_) => Some(CatalogEntry::Symmetric),
        Builtin::Cyclic(_) | Builtin::ElementaryAbelian { k: 1, .. } => {
            Some(CatalogEntry::SubgroupOfGl1)
        }
        // D_n sits in GL_2(C) by its reflection representation
        Builtin::Dihedral(_) => Some(CatalogEntry::SubgroupOfGl3),
        Builtin::Heisenberg(5) => Some(CatalogEntry::Heisenberg5),
        _ => None,
    }
}

/// Certificate of triviality, matched on how the group was constructed.
pub fn catalog_lookup(group: &FiniteGroup, assertions: &CatalogAssertions) -> Option<CatalogEntry> {
    let from_origin = match group.origin() {
        Origin::Builtin(b) => builtin_entry(b),
        _ => None,
    };
    from_origin.or(assertions
        .gl3_embeddable
        .then_some(CatalogEntry::SubgroupOfGl3))
}

/// Informational remarks that never produce values.
pub fn catalog_notes(group: &FiniteGroup) -> Vec<String> {
    match group.origin() {
        Origin::Builtin(Builtin::Heisenberg(p)) if *p != 5 => {
            vec![format!("conjectural: Ekedahl invariants of the Heisenberg group of order {p}^3 are expected to vanish")]
        }
        _ => Vec::new(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Provenance {
    TheoremConstant,
    BogomolovCorollary,
    ResolutionFormula { bound_gap: Option<u32> },
    Catalog { entry: CatalogEntry },
    WindowSolver,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvariantResult {
    Known {
        value: L0AbElement,
        provenance: Provenance,
    },
    Unknown {
        notes: Vec<String>,
    },
}

impl InvariantResult {
    pub fn value(&self) -> Option<&L0AbElement> {
        match self {
            InvariantResult::Known { value, .. } => Some(value),
            InvariantResult::Unknown { .. } => None,
        }
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        match self {
            InvariantResult::Known { provenance, .. } => Some(provenance),
            InvariantResult::Unknown { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EkedahlOptions {
    pub assertions: CatalogAssertions,
    pub cohomology: CohomologyConfig,
}

/// `e_i(G)`: zero below degree 0, `{Z}` in degree 0, zero in degree 1,
/// `{B0(G)^dual}` in degree 2; above that only from the catalog or resolution data.
pub fn ekedahl_invariant(
    group: &FiniteGroup,
    i: i64,
    data: Option<&ResolutionData>,
    options: &EkedahlOptions,
) -> Result<InvariantResult, EkedahlError> {
    let known = |value, provenance| Ok(InvariantResult::Known { value, provenance });
    match i {
        i if i < 0 => known(L0AbElement::zero(), Provenance::TheoremConstant),
        0 => known(L0AbElement::z(), Provenance::TheoremConstant),
        1 => known(L0AbElement::zero(), Provenance::TheoremConstant),
        2 => {
            let b0 = bogomolov_multiplier_with(group, &options.cohomology)?;
            known(
                l0_class_of(&pontryagin_dual(&b0)?),
                Provenance::BogomolovCorollary,
            )
        }
        _ => {
            if let Some(entry) = catalog_lookup(group, &options.assertions) {
                return known(L0AbElement::zero(), Provenance::Catalog { entry });
            }
            if let Some(data) = data {
                let r = ekedahl_from_resolution(data, i)?;
                return known(
                    r.value,
                    Provenance::ResolutionFormula {
                        bound_gap: r.bound_gap,
                    },
                );
            }
            let mut notes = catalog_notes(group);
            notes.push(format!(
                "e_{i} is not determined without resolution data or a catalog entry"
            ));
            Ok(InvariantResult::Unknown { notes })
        }
    }
}

/// Solves `e_k + e_(k+2) + ... + e_(k+2(n-1)) = sums[k]` with `e_i = 0` for `i < 0`.
///
/// Windows with `k` below `-2(n-1)` must vanish; windows up to the largest key present
/// determine `e_i` for `0 <= i <= max key + 2(n-1)`, and missing keys in that range
/// count as zero. The solution must have `e_0 = {Z}` and `e_1 = 0`.
pub fn solve_from_projective_sums(
    sums: &BTreeMap<i64, L0AbElement>,
    n: u32,
) -> Result<BTreeMap<i64, L0AbElement>, EkedahlError> {
    if n == 0 {
        return Err(EkedahlError::ZeroWidth);
    }
    let shift = 2 * (n as i64 - 1);
    let floor = -shift;
    if let Some((&k, _)) = sums.iter().find(|(&k, v)| k < floor && !v.is_zero()) {
        return Err(EkedahlError::NegativeIndexNonzero(k));
    }
    let Some(&top) = sums.keys().next_back() else {
        return Ok(BTreeMap::new());
    };
    let zero = L0AbElement::zero();
    let mut e: BTreeMap<i64, L0AbElement> = BTreeMap::new();
    for k in floor..=top {
        let mut value = sums.get(&k).cloned().unwrap_or_default();
        for j in 0..n as i64 - 1 {
            value = value - e.get(&(k + 2 * j)).cloned().unwrap_or_default();
        }
        e.insert(k + shift, value);
    }
    let e: BTreeMap<i64, L0AbElement> = e.into_iter().filter(|(i, _)| *i >= 0).collect();
    if e.get(&0).is_some_and(|v| *v != L0AbElement::z()) {
        return Err(EkedahlError::Inconsistent(floor));
    }
    if e.get(&1).is_some_and(|v| *v != zero) {
        return Err(EkedahlError::Inconsistent(floor + 1));
    }
    for k in floor..=top {
        let total: L0AbElement = (0..n as i64)
            .filter_map(|j| e.get(&(k + 2 * j)).cloned())
            .sum();
        if total != sums.get(&k).cloned().unwrap_or_default() {
            return Err(EkedahlError::Inconsistent(k));
        }
    }
    Ok(e)
}
