//! Integral cohomology tables of smooth proper varieties and the map `H^k` from
//! Kontsevich classes to L0(Ab).
//!
//! For a term `c * {X} * L^e` the contribution to `H^k` is `c * {H^(k - 2e)(X, Z)}`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::abelian::{l0_class_of, FGAbelian, L0AbElement};
use crate::kring::{KElement, Monomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HcohError {
    #[error("degree {degree} is outside [0, {top}] for a table of dimension {dimension}")]
    DegreeOutOfRange {
        degree: u32,
        top: u32,
        dimension: u32,
    },
    #[error("blow-up center of dimension {center} and codimension {codim} does not fit in dimension {ambient}")]
    DimensionMismatch {
        ambient: u32,
        center: u32,
        codim: u32,
    },
    #[error("codimension must be at least 1")]
    ZeroCodimension,
    #[error("table has torsion in degree {0}; supply the product table directly")]
    HasTorsion(u32),
    #[error("H^{k} is not determined modulo Fil^{tau}: need k > 2 * {tau}")]
    InsufficientPrecision { k: i64, tau: i64 },
    #[error("no cohomology table for `{0}`")]
    MissingTable(String),
    #[error("`{0}` is not marked smooth and proper")]
    NotSmoothProper(String),
    #[error("coefficient {0} does not fit in 64 bits")]
    CoefficientOverflow(i128),
}

/// `H^k(X, Z)` for `0 <= k <= 2 dim X`; trivial groups are not stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CohomologyTable {
    dimension: u32,
    groups: BTreeMap<u32, FGAbelian>,
}

impl CohomologyTable {
    /// All groups zero.
    pub fn empty(dimension: u32) -> Self {
        CohomologyTable {
            dimension,
            groups: BTreeMap::new(),
        }
    }

    pub fn point() -> Self {
        table_projective_space(0)
    }

    pub fn from_groups(
        dimension: u32,
        groups: impl IntoIterator<Item = (u32, FGAbelian)>,
    ) -> Result<Self, HcohError> {
        let mut t = Self::empty(dimension);
        for (k, g) in groups {
            t.set(k, g)?;
        }
        Ok(t)
    }

    pub fn set(&mut self, degree: u32, group: FGAbelian) -> Result<(), HcohError> {
        if degree > 2 * self.dimension {
            return Err(HcohError::DegreeOutOfRange {
                degree,
                top: 2 * self.dimension,
                dimension: self.dimension,
            });
        }
        if group.is_trivial() {
            self.groups.remove(&degree);
        } else {
            self.groups.insert(degree, group);
        }
        Ok(())
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    /// `H^k`, zero outside the stored range (negative degrees included).
    pub fn get(&self, k: i64) -> FGAbelian {
        u32::try_from(k)
            .ok()
            .and_then(|k| self.groups.get(&k))
            .cloned()
            .unwrap_or_else(FGAbelian::trivial)
    }

    /// Nonzero degrees with their groups.
    pub fn groups(&self) -> impl Iterator<Item = (u32, &FGAbelian)> {
        self.groups.iter().map(|(k, g)| (*k, g))
    }

    pub fn is_torsion_free(&self) -> bool {
        self.groups.values().all(FGAbelian::is_torsion_free)
    }

    /// Alternating sum of free ranks.
    pub fn euler_characteristic(&self) -> i64 {
        self.groups
            .iter()
            .map(|(k, g)| {
                if k % 2 == 0 {
                    g.rank() as i64
                } else {
                    -(g.rank() as i64)
                }
            })
            .sum()
    }

    /// `H^k` of `x` plus shifted copies `H^(k - 2i)` of `y` for `i` in `shifts`.
    fn with_shifted_copies(
        base: Option<&CohomologyTable>,
        y: &CohomologyTable,
        shifts: std::ops::Range<u32>,
        dimension: u32,
    ) -> Self {
        let mut groups: BTreeMap<u32, FGAbelian> =
            base.map(|b| b.groups.clone()).unwrap_or_default();
        for i in shifts {
            for (k, g) in y.groups() {
                let slot = groups.entry(k + 2 * i).or_insert_with(FGAbelian::trivial);
                *slot = slot.direct_sum(g);
            }
        }
        CohomologyTable { dimension, groups }
    }
}

/// `Z` in every even degree up to `2n`.
pub fn table_projective_space(n: u32) -> CohomologyTable {
    CohomologyTable {
        dimension: n,
        groups: (0..=n).map(|i| (2 * i, FGAbelian::free(1))).collect(),
    }
}

/// Cohomology of the blow-up of `x` along a center `y` of codimension `d`, and of its exceptional divisor:
///
/// ```text
/// H^k(Bl) = H^k(X) + H^(k-2)(Y) + ... + H^(k-2(d-1))(Y)
/// H^k(E)  = H^k(Y) + H^(k-2)(Y) + ... + H^(k-2(d-1))(Y)
/// ```
pub fn table_blowup(
    x: &CohomologyTable,
    y: &CohomologyTable,
    d: u32,
) -> Result<(CohomologyTable, CohomologyTable), HcohError> {
    if d == 0 {
        return Err(HcohError::ZeroCodimension);
    }
    if y.dimension + d != x.dimension {
        return Err(HcohError::DimensionMismatch {
            ambient: x.dimension,
            center: y.dimension,
            codim: d,
        });
    }
    let bl = CohomologyTable::with_shifted_copies(Some(x), y, 1..d, x.dimension);
    let e = CohomologyTable::with_shifted_copies(None, y, 0..d, x.dimension - 1);
    Ok((bl, e))
}

/// Kunneth formula without Tor terms.
pub fn table_product_torsion_free(
    a: &CohomologyTable,
    b: &CohomologyTable,
) -> Result<CohomologyTable, HcohError> {
    for t in [a, b] {
        if let Some((k, _)) = t.groups().find(|(_, g)| !g.is_torsion_free()) {
            return Err(HcohError::HasTorsion(k));
        }
    }
    let mut ranks: BTreeMap<u32, usize> = BTreeMap::new();
    for (i, ga) in a.groups() {
        for (j, gb) in b.groups() {
            *ranks.entry(i + j).or_default() += ga.rank() * gb.rank();
        }
    }
    Ok(CohomologyTable {
        dimension: a.dimension + b.dimension,
        groups: ranks
            .into_iter()
            .filter(|&(_, r)| r > 0)
            .map(|(k, r)| (k, FGAbelian::free(r)))
            .collect(),
    })
}

/// Table of a monomial: the point for the unit, Kunneth for torsion-free products.
pub fn monomial_table(m: &Monomial) -> Result<CohomologyTable, HcohError> {
    let mut table = CohomologyTable::point();
    for s in m.factors() {
        if !s.smooth_proper() {
            return Err(HcohError::NotSmoothProper(s.name().to_string()));
        }
        let t = s
            .table()
            .ok_or_else(|| HcohError::MissingTable(s.name().to_string()))?;
        table = match m.factors().len() {
            1 => t.clone(),
            _ => table_product_torsion_free(&table, t)
                .map_err(|_| HcohError::MissingTable(m.to_string()))?,
        };
    }
    Ok(table)
}

/// `H^k(x)` in L0(Ab). Requires `k > 2 tau` when `x` carries precision `tau`.
pub fn h_k(x: &KElement, k: i64) -> Result<L0AbElement, HcohError> {
    if let Some(tau) = x.precision() {
        if k <= 2 * tau {
            return Err(HcohError::InsufficientPrecision { k, tau });
        }
    }
    let mut out = L0AbElement::zero();
    let mut cached: Option<(&Monomial, CohomologyTable)> = None;
    for (m, e, c) in x.terms() {
        let table = match &cached {
            Some((prev, t)) if *prev == m => t,
            _ => &cached.insert((m, monomial_table(m)?)).1,
        };
        let group = table.get(k - 2 * e);
        if group.is_trivial() {
            continue;
        }
        let c = i64::try_from(c).map_err(|_| HcohError::CoefficientOverflow(c))?;
        out += l0_class_of(&group) * c;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kring::{GeneratorSymbol, KElement};

    fn z(r: usize) -> FGAbelian {
        FGAbelian::free(r)
    }

    #[test]
    fn projective_spaces() {
        assert_eq!(
            table_projective_space(0).groups().collect::<Vec<_>>(),
            vec![(0, &z(1))]
        );
        let p2 = table_projective_space(2);
        assert_eq!(
            p2.groups().map(|(k, _)| k).collect::<Vec<_>>(),
            vec![0, 2, 4]
        );
        assert_eq!(p2.euler_characteristic(), 3);
    }

    #[test]
    fn blowup_of_plane_at_point() {
        let (bl, e) =
            table_blowup(&table_projective_space(2), &CohomologyTable::point(), 2).unwrap();
        assert_eq!(
            bl,
            CohomologyTable::from_groups(2, [(0, z(1)), (2, z(2)), (4, z(1))]).unwrap()
        );
        assert_eq!(e, table_projective_space(1));
        let x = table_projective_space(3);
        let y = table_projective_space(2);
        let (bl, e) = table_blowup(&x, &y, 1).unwrap();
        assert_eq!(bl, x);
        assert_eq!(e, y);
        assert!(matches!(
            table_blowup(&x, &y, 2),
            Err(HcohError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn torsion_propagates() {
        let y = CohomologyTable::from_groups(1, [(0, z(1)), (2, FGAbelian::cyclic(2))]).unwrap();
        let x = CohomologyTable::from_groups(3, [(0, z(1)), (6, z(1))]).unwrap();
        let (bl, _) = table_blowup(&x, &y, 2).unwrap();
        assert_eq!(bl.get(4), FGAbelian::cyclic(2));
    }

    #[test]
    fn kunneth() {
        let p1 = table_projective_space(1);
        let q = table_product_torsion_free(&p1, &p1).unwrap();
        assert_eq!(
            q,
            CohomologyTable::from_groups(2, [(0, z(1)), (2, z(2)), (4, z(1))]).unwrap()
        );
        assert_eq!(
            table_product_torsion_free(&p1, &CohomologyTable::point()).unwrap(),
            p1
        );
        let t = CohomologyTable::from_groups(1, [(0, z(1)), (1, FGAbelian::cyclic(2))]).unwrap();
        assert_eq!(
            table_product_torsion_free(&p1, &t),
            Err(HcohError::HasTorsion(1))
        );
    }

    #[test]
    fn out_of_range_degrees_are_rejected() {
        let mut t = CohomologyTable::empty(1);
        assert!(t.set(3, z(1)).is_err());
        assert_eq!(t.get(-2), FGAbelian::trivial());
    }

    #[test]
    fn h_k_examples() {
        let p2 = GeneratorSymbol::with_table("P2", table_projective_space(2)).unwrap();
        let x = KElement::symbol(&p2).mul(&KElement::lefschetz(-2));
        assert_eq!(h_k(&x, -2).unwrap(), L0AbElement::z());
        assert_eq!(h_k(&KElement::one(), 0).unwrap(), L0AbElement::z());
        assert!(h_k(&x, 1).unwrap().is_zero());
        let truncated = x.truncate(-1);
        assert_eq!(
            h_k(&truncated, -2),
            Err(HcohError::InsufficientPrecision { k: -2, tau: -1 })
        );
        let bare = GeneratorSymbol::new("Y", 1, true).unwrap();
        assert_eq!(
            h_k(&KElement::symbol(&bare), 0),
            Err(HcohError::MissingTable("Y".into()))
        );
    }

    #[test]
    fn product_symbols_use_kunneth() {
        let p1 = GeneratorSymbol::with_table("P1", table_projective_space(1)).unwrap();
        let sq = KElement::symbol(&p1).mul(&KElement::symbol(&p1));
        assert_eq!(h_k(&sq, 2).unwrap(), L0AbElement::z() * 2);
    }
}
