//! `H^2(G, C*)` from the normalized bar complex, restriction maps, and the
//! Bogomolov multiplier.
//!
//! With `m = |G|`, multiplication by `m` kills `H^2(G, C*)`, so the coefficient
//! sequence `1 -> mu_m -> C* -> C* -> 1` (last map `x -> x^m`) gives
//!
//! ```text
//! H^2(G, C*) = H^2(G, Z/m) / beta(Hom(G, Z/m))
//! ```
//!
//! where `beta` is the connecting map. Everything below is exact arithmetic over
//! `Z/m`, split by the Chinese remainder theorem into prime powers.
//!
//! The same modulus `m = |G|` is used for every subgroup (`|A|` divides `m`),
//! so restriction is literal restriction of cochains.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use thiserror::Error;

use crate::abelian::zmod::{LocalKernel, LocalRing, SparseRow};
use crate::abelian::{
    canonicalize, kernel_of_presented_hom, smith_normal_form, AbelianError, FGAbelian, IntMatrix,
    PresentedAbelian,
};
use crate::group::{maximal_abelian_subgroups, FiniteGroup, Subgroup};

/// Default largest group order accepted by the cohomology routines.
pub const DEFAULT_ORDER_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("group order {order} exceeds the cap {cap}")]
    CapExceeded { order: usize, cap: usize },
    #[error("coboundary matrices are provided in degrees 1 and 2, not {0}")]
    UnsupportedDegree(usize),
    #[error("modulus {0} must be at least 2")]
    BadModulus(u64),
    #[error("modulus {modulus} is not a multiple of the group order {order}")]
    ModulusNotMultiple { modulus: u64, order: usize },
    #[error(
        "values do not define a homomorphism to Z/{modulus}: chi({a}*{b}) != chi({a}) + chi({b})"
    )]
    NotAHomomorphism { modulus: u64, a: usize, b: usize },
    #[error("presentations were computed with different moduli ({0} and {1})")]
    ModulusMismatch(u64, u64),
    #[error("presentation does not belong to the given group")]
    WrongGroup,
    #[error("could not express a cochain in the presentation: {0}")]
    ExpressFailed(String),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
}

/// Runtime limits for cohomology computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CohomologyConfig {
    pub order_cap: usize,
}

impl Default for CohomologyConfig {
    fn default() -> Self {
        CohomologyConfig {
            order_cap: DEFAULT_ORDER_CAP,
        }
    }
}

impl CohomologyConfig {
    fn check(&self, group: &FiniteGroup) -> Result<(), CohomologyError> {
        if group.order() > self.order_cap {
            return Err(CohomologyError::CapExceeded {
                order: group.order(),
                cap: self.order_cap,
            });
        }
        Ok(())
    }
}

/// Coordinates of normalized cochains: a k-cochain is a vector indexed by
/// k-tuples of non-identity elements in lexicographic order.
#[derive(Debug, Clone)]
pub struct NormalizedCochains {
    nonidentity: Vec<usize>,
    position: Vec<Option<usize>>,
}

impl NormalizedCochains {
    pub fn new(group: &FiniteGroup) -> Self {
        let nonidentity: Vec<usize> = (0..group.order())
            .filter(|&g| g != group.identity())
            .collect();
        let mut position = vec![None; group.order()];
        for (i, &g) in nonidentity.iter().enumerate() {
            position[g] = Some(i);
        }
        NormalizedCochains {
            nonidentity,
            position,
        }
    }

    /// `(|G| - 1)^k`.
    pub fn dim(&self, k: usize) -> usize {
        self.nonidentity.len().pow(k as u32)
    }

    pub fn nonidentity(&self) -> &[usize] {
        &self.nonidentity
    }

    /// Index of a tuple, `None` if any entry is the identity.
    pub fn index(&self, tuple: &[usize]) -> Option<usize> {
        let n = self.nonidentity.len();
        tuple
            .iter()
            .try_fold(0, |acc, &g| self.position[g].map(|p| acc * n + p))
    }

    /// The tuple at an index.
    pub fn tuple(&self, k: usize, mut index: usize) -> Vec<usize> {
        let n = self.nonidentity.len();
        let mut out = vec![0; k];
        for slot in out.iter_mut().rev() {
            *slot = self.nonidentity[index % n];
            index /= n;
        }
        out
    }
}

/// Sparse matrix over `Z/m`, one sparse row per output coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModMatrix {
    pub modulus: u64,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<SparseRow>,
}

impl ModMatrix {
    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.cols);
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .fold(0, |acc, &(j, v)| (acc + v * x[j]) % self.modulus)
            })
            .collect()
    }

    /// `self * other`.
    pub fn compose(&self, other: &ModMatrix) -> ModMatrix {
        assert_eq!(self.cols, other.rows);
        let m = self.modulus;
        let entries = self
            .entries
            .iter()
            .map(|row| {
                let mut acc = std::collections::BTreeMap::new();
                for &(k, a) in row {
                    for &(j, b) in &other.entries[k] {
                        *acc.entry(j).or_insert(0u64) =
                            (acc.get(&j).copied().unwrap_or(0) + a * b) % m;
                    }
                }
                acc.into_iter().filter(|&(_, v)| v != 0).collect()
            })
            .collect();
        ModMatrix {
            modulus: m,
            rows: self.rows,
            cols: other.cols,
            entries,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Vec::is_empty)
    }

    pub fn to_dense(&self) -> Vec<Vec<u64>> {
        self.entries
            .iter()
            .map(|row| {
                let mut d = vec![0; self.cols];
                for &(j, v) in row {
                    d[j] = v;
                }
                d
            })
            .collect()
    }
}

fn push_term(row: &mut SparseRow, col: Option<usize>, sign: i64, m: u64) {
    if let Some(c) = col {
        let v = sign.rem_euclid(m as i64) as u64;
        match row.iter_mut().find(|(j, _)| *j == c) {
            Some(entry) => entry.1 = (entry.1 + v) % m,
            None => row.push((c, v)),
        }
    }
}

fn finish_row(mut row: SparseRow) -> SparseRow {
    row.retain(|&(_, v)| v != 0);
    row.sort_unstable();
    row
}

/// `(delta f)(g, h) = f(h) - f(gh) + f(g)`.
fn delta1_row(
    group: &FiniteGroup,
    idx: &NormalizedCochains,
    g: usize,
    h: usize,
    m: u64,
) -> SparseRow {
    let mut row = Vec::with_capacity(3);
    push_term(&mut row, idx.index(&[h]), 1, m);
    push_term(&mut row, idx.index(&[group.mul(g, h)]), -1, m);
    push_term(&mut row, idx.index(&[g]), 1, m);
    finish_row(row)
}

/// `(delta c)(g, h, k) = c(h, k) - c(gh, k) + c(g, hk) - c(g, h)`.
fn delta2_row(
    group: &FiniteGroup,
    idx: &NormalizedCochains,
    g: usize,
    h: usize,
    k: usize,
    m: u64,
) -> SparseRow {
    let mut row = Vec::with_capacity(4);
    push_term(&mut row, idx.index(&[h, k]), 1, m);
    push_term(&mut row, idx.index(&[group.mul(g, h), k]), -1, m);
    push_term(&mut row, idx.index(&[g, group.mul(h, k)]), 1, m);
    push_term(&mut row, idx.index(&[g, h]), -1, m);
    finish_row(row)
}

/// Matrix of `delta^k : C^k -> C^{k+1}` on normalized cochains with `Z/m` values.
/// Rows are indexed by (k+1)-tuples, columns by k-tuples.
pub fn coboundary_matrix(
    group: &FiniteGroup,
    k: usize,
    m: u64,
) -> Result<ModMatrix, CohomologyError> {
    if m < 2 {
        return Err(CohomologyError::BadModulus(m));
    }
    let idx = NormalizedCochains::new(group);
    let entries: Vec<SparseRow> = match k {
        1 => (0..idx.dim(2))
            .map(|r| {
                let t = idx.tuple(2, r);
                delta1_row(group, &idx, t[0], t[1], m)
            })
            .collect(),
        2 => (0..idx.dim(3))
            .map(|r| {
                let t = idx.tuple(3, r);
                delta2_row(group, &idx, t[0], t[1], t[2], m)
            })
            .collect(),
        other => return Err(CohomologyError::UnsupportedDegree(other)),
    };
    Ok(ModMatrix {
        modulus: m,
        rows: idx.dim(k + 1),
        cols: idx.dim(k),
        entries,
    })
}

/// Checks that `chi` (one value per element) is a homomorphism `G -> Z/m`.
fn check_character(group: &FiniteGroup, chi: &[u64], m: u64) -> Result<(), CohomologyError> {
    assert_eq!(chi.len(), group.order(), "one character value per element");
    for a in 0..group.order() {
        for b in 0..group.order() {
            if (chi[a] + chi[b]) % m != chi[group.mul(a, b)] % m {
                return Err(CohomologyError::NotAHomomorphism { modulus: m, a, b });
            }
        }
    }
    Ok(())
}

/// Image of a character under the connecting map:
/// `c(g, h) = (chi(g) + chi(h) - chi(gh)) / m  mod m`, values lifted to `[0, m)`.
pub fn bockstein_cocycle(
    group: &FiniteGroup,
    chi: &[u64],
    m: u64,
) -> Result<Vec<u64>, CohomologyError> {
    if m < 2 {
        return Err(CohomologyError::BadModulus(m));
    }
    check_character(group, chi, m)?;
    Ok(bockstein_unchecked(
        group,
        &NormalizedCochains::new(group),
        chi,
        m,
    ))
}

fn bockstein_unchecked(
    group: &FiniteGroup,
    idx: &NormalizedCochains,
    chi: &[u64],
    m: u64,
) -> Vec<u64> {
    let lift = |g: usize| chi[g] % m;
    let mut c = vec![0; idx.dim(2)];
    for (r, slot) in c.iter_mut().enumerate() {
        let t = idx.tuple(2, r);
        let total = lift(t[0]) + lift(t[1]) - lift(group.mul(t[0], t[1]));
        *slot = (total / m) % m;
    }
    c
}

/// One prime-power component of a presented `H^2(G, Z/q) / beta`.
#[derive(Debug, Clone)]
struct PrimePart {
    ring: LocalRing,
    cocycles: LocalKernel,
    /// transform of the small Smith form; class coordinates are `(u z)_j mod d_j`
    u: IntMatrix,
    /// `(row of u, order)` for every nontrivial cyclic factor
    kept: Vec<(usize, u64)>,
}

/// A presentation of `H^2(G, C*)` with 2-cocycle representatives.
#[derive(Debug, Clone)]
pub struct H2Presentation {
    fingerprint: String,
    order: usize,
    modulus: u64,
    orders: Vec<u64>,
    reps: Vec<Vec<u64>>,
    parts: Vec<PrimePart>,
    coords: GeneratorCoordinates,
}

impl H2Presentation {
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Order of every generator; the group is the direct sum of these cyclic groups.
    pub fn generator_orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn presentation(&self) -> PresentedAbelian {
        PresentedAbelian::with_orders(&self.orders)
    }

    pub fn group(&self) -> FGAbelian {
        canonicalize(&self.presentation())
    }

    /// Normalized `Z/m`-valued 2-cocycles, one per generator.
    pub fn cocycle_representatives(&self) -> &[Vec<u64>] {
        &self.reps
    }

    /// Coordinates of a normalized 2-cocycle's class, reduced modulo the generator orders.
    pub fn express(&self, cocycle: &[u64]) -> Result<Vec<u64>, CohomologyError> {
        let dim = (self.order - 1).pow(2);
        if cocycle.len() != dim {
            return Err(CohomologyError::ExpressFailed(format!(
                "expected {dim} values, got {}",
                cocycle.len()
            )));
        }
        let projected = self.coords.project_cochain(cocycle);
        let mut out = Vec::with_capacity(self.orders.len());
        for part in &self.parts {
            let q = part.ring.modulus();
            let reduced: Vec<u64> = projected.iter().map(|&x| x % q).collect();
            let z = part.cocycles.coordinates(&reduced).ok_or_else(|| {
                CohomologyError::ExpressFailed(format!("not a cocycle modulo {q}"))
            })?;
            let z: Vec<BigInt> = z.into_iter().map(BigInt::from).collect();
            let uz = part.u.mul_vec(&z);
            for &(row, d) in &part.kept {
                out.push(
                    uz[row]
                        .mod_floor(&BigInt::from(d))
                        .to_u64()
                        .expect("reduced coordinate"),
                );
            }
        }
        Ok(out)
    }
}

fn prime_powers(m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut r = m;
    let mut p = 2;
    while p * p <= r {
        if r.is_multiple_of(p) {
            let mut a = 0;
            while r.is_multiple_of(p) {
                r /= p;
                a += 1;
            }
            out.push((p, a));
        }
        p += 1;
    }
    if r > 1 {
        out.push((r, 1));
    }
    out
}

/// `e` with `e = 1 mod q` and `e = 0 mod m/q`.
fn crt_idempotent(q: u64, m: u64) -> u64 {
    let rest = m / q;
    (0..q)
        .map(|t| t * rest)
        .find(|x| x % q == 1 % q)
        .expect("coprime moduli")
}

/// `H^2(G, C*)` with the default modulus `|G|`.
pub fn h2_units(group: &FiniteGroup) -> Result<H2Presentation, CohomologyError> {
    h2_units_with(group, group.order() as u64, &CohomologyConfig::default())
}

/// `H^2(G, C*)` computed as `H^2(G, Z/m) / beta(Hom(G, Z/m))` for a multiple `m` of `|G|`.
pub fn h2_units_with(
    group: &FiniteGroup,
    m: u64,
    config: &CohomologyConfig,
) -> Result<H2Presentation, CohomologyError> {
    config.check(group)?;
    if m < 2 && group.order() > 1 {
        return Err(CohomologyError::BadModulus(m));
    }
    if !m.is_multiple_of(group.order() as u64) {
        return Err(CohomologyError::ModulusNotMultiple {
            modulus: m,
            order: group.order(),
        });
    }
    let fingerprint = group.fingerprint();
    let coords = GeneratorCoordinates::new(group);
    if group.order() == 1 {
        return Ok(H2Presentation {
            fingerprint,
            order: 1,
            modulus: m.max(1),
            orders: vec![],
            reps: vec![],
            parts: vec![],
            coords,
        });
    }
    let idx = &coords.idx;
    let gens = &coords.gens;
    let factors = prime_powers(m);

    // characters G -> Z/m, assembled prime by prime
    let mut characters: Vec<Vec<u64>> = Vec::new();
    for &(p, a) in &factors {
        let ring = LocalRing::new(p, a);
        let q = ring.modulus();
        let e = crt_idempotent(q, m);
        // f(gs) = f(g) + f(s) for generators s forces a homomorphism
        let rows: Vec<SparseRow> = idx
            .nonidentity()
            .iter()
            .flat_map(|&g| gens.iter().map(move |&s| (g, s)))
            .map(|(g, s)| delta1_row(group, idx, g, s, q))
            .collect();
        let homs = LocalKernel::compute(ring, rows, idx.dim(1));
        for (values, _) in homs.generators() {
            let mut chi = vec![0u64; group.order()];
            for (i, &g) in idx.nonidentity().iter().enumerate() {
                chi[g] = values[i] * e % m;
            }
            characters.push(chi);
        }
    }
    // coboundaries of point functions and Bockstein images, in generator coordinates over Z/m
    let mut relators: Vec<Vec<u64>> = Vec::new();
    for &x in idx.nonidentity() {
        let ind = |a: usize| u64::from(a == x);
        relators.push(coords.project(|g, s| (ind(s) + m - ind(group.mul(g, s)) + ind(g)) % m));
    }
    for chi in &characters {
        relators.push(coords.project(|g, s| ((chi[g] + chi[s] - chi[group.mul(g, s)]) / m) % m));
    }

    let forms = coords.tree_forms(group);
    let mut orders = Vec::new();
    let mut reps = Vec::new();
    let mut parts = Vec::new();
    for &(p, a) in &factors {
        let ring = LocalRing::new(p, a);
        let q = ring.modulus();
        let e = crt_idempotent(q, m);
        let cocycles =
            LocalKernel::compute(ring, coords.constraint_rows(group, &forms, q), coords.dim());
        let weights = cocycles.orders();
        let s = weights.len();

        let mut relation_cols: Vec<Vec<BigInt>> = Vec::new();
        for (i, &w) in weights.iter().enumerate() {
            let mut col = vec![BigInt::from(0); s];
            col[i] = BigInt::from(p.pow(w));
            relation_cols.push(col);
        }
        for b in &relators {
            let reduced: Vec<u64> = b.iter().map(|&x| x % q).collect();
            let z = cocycles.coordinates(&reduced).ok_or_else(|| {
                CohomologyError::ExpressFailed(format!(
                    "coboundary or Bockstein image is not a cocycle mod {q}"
                ))
            })?;
            relation_cols.push(z.into_iter().map(BigInt::from).collect());
        }
        let relations = IntMatrix::from_cols(s, &relation_cols);
        let smith = smith_normal_form(&relations);
        let diag = smith.diagonal();
        let u_inv = unimodular_inverse(&smith.u);
        let kernel_gens = cocycles.generators();

        let mut kept = Vec::new();
        for (j, d) in diag.iter().enumerate() {
            let d = d.to_u64().expect("H^2 factor fits in u64");
            if d == 1 {
                continue;
            }
            debug_assert!(d != 0, "H^2 is finite");
            kept.push((j, d));
            let mut rep_x = vec![0u64; coords.dim()];
            for (i, (g, _)) in kernel_gens.iter().enumerate() {
                let coeff = u_inv[(i, j)]
                    .mod_floor(&BigInt::from(q))
                    .to_u64()
                    .expect("reduced");
                if coeff == 0 {
                    continue;
                }
                for (slot, &x) in rep_x.iter_mut().zip(g) {
                    *slot = (*slot + coeff * x) % q;
                }
            }
            let rep_q = coords.expand(&forms, &rep_x, q);
            reps.push(rep_q.iter().map(|&x| x * e % m).collect());
            orders.push(d);
        }
        parts.push(PrimePart {
            ring,
            cocycles,
            u: smith.u,
            kept,
        });
    }
    Ok(H2Presentation {
        fingerprint,
        order: group.order(),
        modulus: m,
        orders,
        reps,
        parts,
        coords,
    })
}

/// Integer linear form in the generator coordinates.
type Form = Vec<(usize, i64)>;

/// Normalized 2-cocycles are determined by their values `c(g, s)` for `g != 1` and `s`
/// in a generating set, because the cocycle identity gives
/// `c(g, hs) = c(g, h) + c(gh, s) - c(h, s)`. Expanding along a spanning tree of the
/// Cayley graph writes every `c(g, h)` in these coordinates; the remaining edges of the
/// graph are the constraints.
#[derive(Debug, Clone)]
struct GeneratorCoordinates {
    idx: NormalizedCochains,
    gens: Vec<usize>,
    /// `parent[h] = (h', i)` with `h' * gens[i] = h`, breadth-first from the identity
    parent: Vec<Option<(usize, usize)>>,
    bfs: Vec<usize>,
}

impl GeneratorCoordinates {
    fn new(group: &FiniteGroup) -> Self {
        let idx = NormalizedCochains::new(group);
        let mut gens: Vec<usize> = Vec::new();
        for s in group.generating_set() {
            if s != group.identity() && !gens.contains(&s) {
                gens.push(s);
            }
        }
        let mut parent = vec![None; group.order()];
        let mut seen = vec![false; group.order()];
        let mut bfs = vec![group.identity()];
        seen[group.identity()] = true;
        let mut head = 0;
        while head < bfs.len() {
            let h = bfs[head];
            head += 1;
            for (i, &s) in gens.iter().enumerate() {
                let t = group.mul(h, s);
                if !seen[t] {
                    seen[t] = true;
                    parent[t] = Some((h, i));
                    bfs.push(t);
                }
            }
        }
        debug_assert_eq!(bfs.len(), group.order(), "generating set generates");
        GeneratorCoordinates {
            idx,
            gens,
            parent,
            bfs,
        }
    }

    fn dim(&self) -> usize {
        self.idx.nonidentity.len() * self.gens.len()
    }

    /// Coordinate of `c(g, gens[i])`; `None` when `g` is the identity.
    fn var(&self, g: usize, i: usize) -> Option<usize> {
        self.idx.position[g].map(|p| p * self.gens.len() + i)
    }

    /// Coordinates of the cochain with values `c(g, s)`.
    fn project(&self, c: impl Fn(usize, usize) -> u64) -> Vec<u64> {
        let mut out = vec![0; self.dim()];
        for &g in &self.idx.nonidentity {
            for (i, &s) in self.gens.iter().enumerate() {
                out[self.var(g, i).expect("non-identity")] = c(g, s);
            }
        }
        out
    }

    /// `forms[pos(g)][h]` expresses `c(g, h)`.
    fn tree_forms(&self, group: &FiniteGroup) -> Vec<Vec<Form>> {
        let n = group.order();
        let mut forms = vec![vec![Form::new(); n]; self.idx.nonidentity.len()];
        for (pg, &g) in self.idx.nonidentity.iter().enumerate() {
            for &h in &self.bfs[1..] {
                let (hp, i) = self.parent[h].expect("tree covers the group");
                let mut f = forms[pg][hp].clone();
                let extra = [(self.var(group.mul(g, hp), i), 1), (self.var(hp, i), -1)];
                add_terms(&mut f, extra.iter().filter_map(|&(v, c)| v.map(|v| (v, c))));
                forms[pg][h] = f;
            }
        }
        forms
    }

    /// `c(g, hs) - c(g, h) - c(gh, s) + c(h, s) = 0` over the non-tree edges `(h, s)`.
    fn constraint_rows(&self, group: &FiniteGroup, forms: &[Vec<Form>], q: u64) -> Vec<SparseRow> {
        let mut rows = Vec::new();
        for (pg, &g) in self.idx.nonidentity.iter().enumerate() {
            for h in 0..group.order() {
                for (i, &s) in self.gens.iter().enumerate() {
                    let t = group.mul(h, s);
                    if self.parent[t] == Some((h, i)) {
                        continue;
                    }
                    let mut f = forms[pg][t].clone();
                    add_terms(&mut f, forms[pg][h].iter().map(|&(v, c)| (v, -c)));
                    let extra = [(self.var(group.mul(g, h), i), -1), (self.var(h, i), 1)];
                    add_terms(&mut f, extra.iter().filter_map(|&(v, c)| v.map(|v| (v, c))));
                    let row: SparseRow = f
                        .into_iter()
                        .map(|(v, c)| (v, c.rem_euclid(q as i64) as u64))
                        .filter(|&(_, c)| c != 0)
                        .collect();
                    if !row.is_empty() {
                        rows.push(row);
                    }
                }
            }
        }
        rows
    }

    /// The full normalized cochain `c(g, h)` modulo `q` from generator coordinates.
    fn expand(&self, forms: &[Vec<Form>], x: &[u64], q: u64) -> Vec<u64> {
        let mut out = vec![0; self.idx.dim(2)];
        for (pg, &g) in self.idx.nonidentity.iter().enumerate() {
            for &h in &self.idx.nonidentity {
                let v = forms[pg][h].iter().fold(0i64, |acc, &(var, c)| {
                    (acc + c * x[var] as i64).rem_euclid(q as i64)
                });
                out[self.idx.index(&[g, h]).expect("non-identity")] = v as u64;
            }
        }
        out
    }

    fn project_cochain(&self, cochain: &[u64]) -> Vec<u64> {
        self.project(|g, s| cochain[self.idx.index(&[g, s]).expect("non-identity")])
    }
}

/// Adds terms to a sorted form, dropping zeros.
fn add_terms(form: &mut Form, terms: impl Iterator<Item = (usize, i64)>) {
    for (v, c) in terms {
        match form.binary_search_by_key(&v, |&(w, _)| w) {
            Ok(at) => {
                form[at].1 += c;
                if form[at].1 == 0 {
                    form.remove(at);
                }
            }
            Err(at) => {
                if c != 0 {
                    form.insert(at, (v, c));
                }
            }
        }
    }
}

/// Inverse of a unimodular matrix via its own Smith form.
fn unimodular_inverse(u: &IntMatrix) -> IntMatrix {
    // s.u * u * s.v = I  =>  u^-1 = s.v * s.u
    let s = smith_normal_form(u);
    debug_assert_eq!(s.d, IntMatrix::identity(u.rows()));
    s.v.mul(&s.u)
}

/// Matrix of the restriction `H^2(G) -> H^2(A)` against the two presentations.
///
/// `on_sub` must be computed for `sub.to_group()` with the same modulus as `on_parent`.
pub fn restriction_matrix(
    parent: &FiniteGroup,
    sub: &Subgroup<'_>,
    on_parent: &H2Presentation,
    on_sub: &H2Presentation,
) -> Result<IntMatrix, CohomologyError> {
    if on_parent.modulus != on_sub.modulus {
        return Err(CohomologyError::ModulusMismatch(
            on_parent.modulus,
            on_sub.modulus,
        ));
    }
    if on_parent.fingerprint != parent.fingerprint()
        || on_sub.fingerprint != sub.to_group().fingerprint()
    {
        return Err(CohomologyError::WrongGroup);
    }
    let parent_idx = NormalizedCochains::new(parent);
    let members = sub.members();
    let sub_group = sub.to_group();
    let sub_idx = NormalizedCochains::new(&sub_group);

    let mut columns = Vec::with_capacity(on_parent.reps.len());
    for rep in &on_parent.reps {
        let mut restricted = vec![0u64; sub_idx.dim(2)];
        for (r, slot) in restricted.iter_mut().enumerate() {
            let t = sub_idx.tuple(2, r);
            let at = parent_idx
                .index(&[members[t[0]], members[t[1]]])
                .expect("non-identity maps to non-identity");
            *slot = rep[at];
        }
        let coords = on_sub.express(&restricted)?;
        columns.push(coords.into_iter().map(BigInt::from).collect::<Vec<_>>());
    }
    Ok(IntMatrix::from_cols(on_sub.orders.len(), &columns))
}

/// Intersection of the kernels of restriction to each listed subgroup, in canonical form.
pub fn kernel_of_restrictions(
    group: &FiniteGroup,
    subgroups: &[Subgroup<'_>],
    config: &CohomologyConfig,
) -> Result<FGAbelian, CohomologyError> {
    let m = group.order() as u64;
    let on_group = h2_units_with(group, m.max(2), config)?;
    if on_group.orders.is_empty() {
        return Ok(FGAbelian::trivial());
    }
    let blocks: Vec<(PresentedAbelian, IntMatrix)> = subgroups
        .par_iter()
        .map(|sub| {
            let on_sub = h2_units_with(&sub.to_group(), m, config)?;
            let r = restriction_matrix(group, sub, &on_group, &on_sub)?;
            Ok((on_sub.presentation(), r))
        })
        .collect::<Result<_, CohomologyError>>()?;

    let mut codomain = PresentedAbelian::free(0);
    let mut map = IntMatrix::zeros(0, on_group.orders.len());
    for (pres, r) in blocks {
        codomain = codomain.direct_sum(&pres);
        map = map.vcat(&r);
    }
    Ok(kernel_of_presented_hom(
        &on_group.presentation(),
        &codomain,
        &map,
    )?)
}

/// `B0(G)`: classes in `H^2(G, C*)` restricting to zero on every abelian subgroup.
/// Maximal abelian subgroups suffice because restriction factors through inclusions.
pub fn bogomolov_multiplier(group: &FiniteGroup) -> Result<FGAbelian, CohomologyError> {
    bogomolov_multiplier_with(group, &CohomologyConfig::default())
}

pub fn bogomolov_multiplier_with(
    group: &FiniteGroup,
    config: &CohomologyConfig,
) -> Result<FGAbelian, CohomologyError> {
    config.check(group)?;
    let subgroups = maximal_abelian_subgroups(group);
    kernel_of_restrictions(group, &subgroups, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::builtin_group;

    #[test]
    fn small_coboundary_matrices() {
        let z2 = builtin_group("cyclic", &[2]).unwrap();
        let d1 = coboundary_matrix(&z2, 1, 2).unwrap();
        assert_eq!((d1.rows, d1.cols), (1, 1));
        assert!(d1.is_zero());
        let d2 = coboundary_matrix(&z2, 2, 2).unwrap();
        assert_eq!((d2.rows, d2.cols), (1, 1));
        assert!(d2.is_zero());
        let s3 = builtin_group("symmetric", &[3]).unwrap();
        let d1 = coboundary_matrix(&s3, 1, 6).unwrap();
        assert_eq!((d1.rows, d1.cols), (25, 5));
        assert!(matches!(
            coboundary_matrix(&s3, 3, 6),
            Err(CohomologyError::UnsupportedDegree(3))
        ));
    }

    #[test]
    fn delta_squared_vanishes() {
        for (name, params) in [
            ("symmetric", vec![3]),
            ("quaternion8", vec![]),
            ("dihedral", vec![4]),
        ] {
            let g = builtin_group(name, &params).unwrap();
            let m = g.order() as u64;
            let d1 = coboundary_matrix(&g, 1, m).unwrap();
            let d2 = coboundary_matrix(&g, 2, m).unwrap();
            assert!(d2.compose(&d1).is_zero(), "{name}");
        }
    }

    #[test]
    fn bockstein_examples() {
        let z2 = builtin_group("cyclic", &[2]).unwrap();
        assert_eq!(bockstein_cocycle(&z2, &[0, 1], 2).unwrap(), vec![1]);
        assert_eq!(bockstein_cocycle(&z2, &[0, 0], 2).unwrap(), vec![0]);
        let z3 = builtin_group("cyclic", &[3]).unwrap();
        // index order (g,g), (g,g^2), (g^2,g), (g^2,g^2)
        assert_eq!(
            bockstein_cocycle(&z3, &[0, 1, 2], 3).unwrap(),
            vec![0, 1, 1, 1]
        );
        assert!(matches!(
            bockstein_cocycle(&z3, &[0, 1, 1], 3),
            Err(CohomologyError::NotAHomomorphism { .. })
        ));
    }

    #[test]
    fn bockstein_images_are_cocycles() {
        let g = builtin_group("dihedral", &[6]).unwrap();
        let m = g.order() as u64;
        // sign character s -> m/2
        let chi: Vec<u64> = (0..g.order())
            .map(|x| if x >= 6 { m / 2 } else { 0 })
            .collect();
        let c = bockstein_cocycle(&g, &chi, m).unwrap();
        let d2 = coboundary_matrix(&g, 2, m).unwrap();
        assert!(d2.apply(&c).iter().all(|&x| x == 0));
    }

    #[test]
    fn known_schur_multipliers() {
        let cases: [(&str, Vec<u64>, FGAbelian); 6] = [
            ("cyclic", vec![4], FGAbelian::trivial()),
            ("symmetric", vec![3], FGAbelian::trivial()),
            ("quaternion8", vec![], FGAbelian::trivial()),
            ("dihedral", vec![4], FGAbelian::cyclic(2)),
            ("elementary_abelian", vec![2, 2], FGAbelian::cyclic(2)),
            ("elementary_abelian", vec![3, 2], FGAbelian::cyclic(3)),
        ];
        for (name, params, expected) in cases {
            let g = builtin_group(name, &params).unwrap();
            assert_eq!(h2_units(&g).unwrap().group(), expected, "{name} {params:?}");
        }
    }

    #[test]
    fn restriction_to_whole_group_is_identity() {
        let g = builtin_group("dihedral", &[4]).unwrap();
        let h = h2_units(&g).unwrap();
        let whole = g.whole();
        let hw = h2_units_with(&whole.to_group(), 8, &CohomologyConfig::default()).unwrap();
        let r = restriction_matrix(&g, &whole, &h, &hw).unwrap();
        assert_eq!(r, IntMatrix::identity(1));
    }

    #[test]
    fn cap_is_enforced() {
        let g = builtin_group("cyclic", &[65]).unwrap();
        assert_eq!(
            h2_units(&g).unwrap_err(),
            CohomologyError::CapExceeded { order: 65, cap: 64 }
        );
    }

    #[test]
    fn bogomolov_small_cases() {
        for (name, params) in [
            ("cyclic", vec![6]),
            ("symmetric", vec![3]),
            ("quaternion8", vec![]),
            ("dihedral", vec![4]),
        ] {
            let g = builtin_group(name, &params).unwrap();
            assert!(bogomolov_multiplier(&g).unwrap().is_trivial(), "{name}");
        }
    }
}
