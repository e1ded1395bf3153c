//! Finitely generated abelian groups: canonical forms, kernels, duals.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use super::snf::{integer_kernel, smith_normal_form, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbelianError {
    #[error(
        "map does not send relation {column} of the domain into the relations of the codomain"
    )]
    NotAHomomorphism { column: usize },
    #[error(
        "group has free rank {0}; only finite groups have a Pontryagin dual of the same shape"
    )]
    NotFinite(usize),
    #[error("map has shape {got:?}, expected {expected:?}")]
    ShapeMismatch {
        got: (usize, usize),
        expected: (usize, usize),
    },
}

/// `Z^rank (+) Z/d_1 (+) ... (+) Z/d_k` with `d_1 | d_2 | ... | d_k` and every `d_i >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FGAbelian {
    rank: usize,
    invariant_factors: Vec<BigUint>,
}

impl FGAbelian {
    pub fn trivial() -> Self {
        FGAbelian {
            rank: 0,
            invariant_factors: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        FGAbelian {
            rank,
            invariant_factors: Vec::new(),
        }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::new(0, &[n])
    }

    /// Canonical form of `Z^rank (+) Z/t_1 (+) ...`; the `t_i` need not form a chain.
    /// A zero entry contributes a free summand, a one contributes nothing.
    pub fn new(rank: usize, torsion: &[u64]) -> Self {
        let diag: Vec<BigInt> = torsion.iter().map(|&t| BigInt::from(t)).collect();
        let mut fg = canonicalize(&PresentedAbelian::new(
            torsion.len(),
            IntMatrix::diagonal(&diag),
        ));
        fg.rank += rank;
        fg
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn invariant_factors(&self) -> &[BigUint] {
        &self.invariant_factors
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn is_torsion_free(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Order of a finite group, `None` if the rank is positive.
    pub fn order(&self) -> Option<BigUint> {
        self.is_finite()
            .then(|| self.invariant_factors.iter().product())
    }

    pub fn direct_sum(&self, other: &FGAbelian) -> FGAbelian {
        canonicalize(&self.presentation().direct_sum(&other.presentation()))
    }

    /// The canonical presentation: one generator per summand, diagonal relations.
    pub fn presentation(&self) -> PresentedAbelian {
        let n = self.rank + self.invariant_factors.len();
        let mut rel = IntMatrix::zeros(n, self.invariant_factors.len());
        for (j, d) in self.invariant_factors.iter().enumerate() {
            rel[(j, j)] = BigInt::from_biguint(Sign::Plus, d.clone());
        }
        PresentedAbelian::new(n, rel)
    }

    /// Invariant factors as machine integers, `None` if one does not fit.
    pub fn torsion_u64(&self) -> Option<Vec<u64>> {
        self.invariant_factors
            .iter()
            .map(ToPrimitive::to_u64)
            .collect()
    }
}

impl fmt::Display for FGAbelian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}

/// `Z^generators / column span of relations`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentedAbelian {
    generators: usize,
    relations: IntMatrix,
}

impl PresentedAbelian {
    pub fn new(generators: usize, relations: IntMatrix) -> Self {
        assert_eq!(
            relations.rows(),
            generators,
            "relation matrix needs one row per generator"
        );
        PresentedAbelian {
            generators,
            relations,
        }
    }

    pub fn free(generators: usize) -> Self {
        Self::new(generators, IntMatrix::zeros(generators, 0))
    }

    /// Generators of the given orders, no other relations.
    pub fn with_orders(orders: &[u64]) -> Self {
        let diag: Vec<BigInt> = orders.iter().map(|&d| BigInt::from(d)).collect();
        Self::new(orders.len(), IntMatrix::diagonal(&diag))
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn direct_sum(&self, other: &PresentedAbelian) -> PresentedAbelian {
        PresentedAbelian::new(
            self.generators + other.generators,
            self.relations.block_diag(&other.relations),
        )
    }

    /// Whether `x` (generator coordinates) lies in the relation lattice.
    pub fn is_zero_element(&self, x: &[BigInt]) -> bool {
        in_column_span(&self.relations, x)
    }
}

/// Cokernel of the relation matrix in canonical form.
pub fn canonicalize(p: &PresentedAbelian) -> FGAbelian {
    let s = smith_normal_form(&p.relations);
    let diag = s.diagonal();
    let nonzero = diag.iter().filter(|d| !d.is_zero()).count();
    let invariant_factors = diag
        .iter()
        .filter(|d| !d.is_zero() && !d.is_one())
        .map(|d| d.magnitude().clone())
        .collect();
    FGAbelian {
        rank: p.generators - nonzero,
        invariant_factors,
    }
}

/// Kernel of the homomorphism `dom -> cod` induced by `map` (codomain rows, domain columns).
pub fn kernel_of_presented_hom(
    dom: &PresentedAbelian,
    cod: &PresentedAbelian,
    map: &IntMatrix,
) -> Result<FGAbelian, AbelianError> {
    let expected = (cod.generators, dom.generators);
    if map.shape() != expected {
        return Err(AbelianError::ShapeMismatch {
            got: map.shape(),
            expected,
        });
    }
    let image_of_relations = map.mul(&dom.relations);
    for column in 0..image_of_relations.cols() {
        if !cod.is_zero_element(&image_of_relations.column(column)) {
            return Err(AbelianError::NotAHomomorphism { column });
        }
    }
    let n = dom.generators;
    if n == 0 {
        return Ok(FGAbelian::trivial());
    }

    // L = {x : map x in span(cod relations)} is the projection of ker [map | cod relations]
    let stacked = integer_kernel(&map.hcat(&cod.relations));
    let mut lifts = IntMatrix::zeros(n, stacked.cols());
    for i in 0..n {
        for j in 0..stacked.cols() {
            lifts[(i, j)] = stacked[(i, j)].clone();
        }
    }
    // coordinates in a basis of L: u L v = d gives basis u^-1 d e_i, coordinate (u x)_i / d_i
    let s = smith_normal_form(&lifts);
    let diag = s.diagonal();
    let rank = s.rank();
    let transformed = s.u.mul(&dom.relations);
    let mut relations = IntMatrix::zeros(rank, dom.relations.cols());
    for i in 0..rank {
        for j in 0..dom.relations.cols() {
            let (q, r) = transformed[(i, j)].div_rem(&diag[i]);
            debug_assert!(r.is_zero(), "domain relations lie in L");
            relations[(i, j)] = q;
        }
    }
    Ok(canonicalize(&PresentedAbelian::new(rank, relations)))
}

/// Finite abelian groups are (non-canonically) self-dual.
pub fn pontryagin_dual(a: &FGAbelian) -> Result<FGAbelian, AbelianError> {
    if a.rank > 0 {
        return Err(AbelianError::NotFinite(a.rank));
    }
    Ok(a.clone())
}

/// Whether `x` is an integer combination of the columns of `m`.
pub fn in_column_span(m: &IntMatrix, x: &[BigInt]) -> bool {
    assert_eq!(m.rows(), x.len());
    let s = smith_normal_form(m);
    let y = s.u.mul_vec(x);
    let diag = s.diagonal();
    y.iter().enumerate().all(|(i, yi)| match diag.get(i) {
        Some(d) if !d.is_zero() => yi.is_multiple_of(d),
        _ => yi.is_zero(),
    })
}
