//! Independent reference computations of `H^2(G, C*)`.

use std::collections::{BTreeMap, HashSet};

use ekedahl::abelian::{smith_normal_form, FGAbelian, IntMatrix};
use ekedahl::group::FiniteGroup;
use num_traits::ToPrimitive;

// ---------------------------------------------------------------------------
// exhaustive enumeration of normalized cochains

/// `H^2(G, C*)` as `Z^2 / (B^2 + Bockstein image)` with coefficients in `Z/|G|`,
/// reported as an element-order profile.
pub fn brute_force_h2(g: &FiniteGroup) -> BTreeMap<u64, u64> {
    let n = g.order();
    let m = n as u64;
    let e = g.identity();
    let nonid: Vec<usize> = (0..n).filter(|&x| x != e).collect();
    let pos = |x: usize| nonid.iter().position(|&y| y == x);
    let k = nonid.len();
    let val = |c: &[u64], a: usize, b: usize| match (pos(a), pos(b)) {
        (Some(i), Some(j)) => c[i * k + j],
        _ => 0,
    };
    let dim = k * k;
    let is_cocycle = |c: &[u64]| {
        (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).all(|d| {
                    let lhs = val(c, b, d) + val(c, a, g.mul(b, d));
                    let rhs = val(c, g.mul(a, b), d) + val(c, a, b);
                    lhs % m == rhs % m
                })
            })
        })
    };
    let mut cocycles = Vec::new();
    let mut c = vec![0u64; dim];
    loop {
        if is_cocycle(&c) {
            cocycles.push(c.clone());
        }
        let mut i = 0;
        while i < dim {
            c[i] += 1;
            if c[i] < m {
                break;
            }
            c[i] = 0;
            i += 1;
        }
        if i == dim {
            break;
        }
    }

    let mut generators = Vec::new();
    let funcs = |f: &mut dyn FnMut(&[u64])| {
        let mut v = vec![0u64; n];
        loop {
            if v[e] == 0 {
                f(&v);
            }
            let mut i = 0;
            while i < n {
                v[i] += 1;
                if v[i] < m {
                    break;
                }
                v[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    };
    funcs(&mut |f: &[u64]| {
        let mut b = vec![0u64; dim];
        for (i, &x) in nonid.iter().enumerate() {
            for (j, &y) in nonid.iter().enumerate() {
                b[i * k + j] = (f[y] + m - f[g.mul(x, y)] + f[x]) % m;
            }
        }
        generators.push(b);
        let hom = (0..n).all(|x| (0..n).all(|y| (f[x] + f[y]) % m == f[g.mul(x, y)]));
        if hom {
            let mut b = vec![0u64; dim];
            for (i, &x) in nonid.iter().enumerate() {
                for (j, &y) in nonid.iter().enumerate() {
                    b[i * k + j] = ((f[x] + f[y] - f[g.mul(x, y)]) / m) % m;
                }
            }
            generators.push(b);
        }
    });

    let mut sub: HashSet<Vec<u64>> = HashSet::from([vec![0u64; dim]]);
    for gen in &generators {
        assert!(is_cocycle(gen));
        let mut frontier: Vec<Vec<u64>> = sub.iter().cloned().collect();
        while let Some(x) = frontier.pop() {
            let y: Vec<u64> = x.iter().zip(gen).map(|(a, b)| (a + b) % m).collect();
            if sub.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    let mut profile = BTreeMap::new();
    for z in &cocycles {
        let mut mult = z.clone();
        let mut ord = 1;
        while !sub.contains(&mult) {
            mult = mult.iter().zip(z).map(|(a, b)| (a + b) % m).collect();
            ord += 1;
        }
        *profile.entry(ord).or_insert(0u64) += 1;
    }
    let h = sub.len() as u64;
    profile.into_iter().map(|(o, c)| (o, c / h)).collect()
}

// ---------------------------------------------------------------------------
// Hopf formula via Fox calculus
//
// For a presentation F/R, the relation module R_ab is the ZG-span M of the rows of
// the Fox Jacobian inside ZG^g. Then R/[F,R] = M / I M and
// H_2(G) = (M cap ker eps) / I M.

type Word = Vec<(usize, bool)>;

fn word(spec: &str) -> Word {
    // letters a, b, c; capitals are inverses
    spec.chars()
        .map(|ch| {
            let lower = ch.to_ascii_lowercase();
            ((lower as u8 - b'a') as usize, ch.is_ascii_lowercase())
        })
        .collect()
}

fn eval(g: &FiniteGroup, gens: &[usize], w: &Word) -> usize {
    w.iter().fold(g.identity(), |acc, &(i, pos)| {
        g.mul(acc, if pos { gens[i] } else { g.inv(gens[i]) })
    })
}

/// Fox derivative row of a relator, evaluated in ZG, as a vector in Z^(|G| * ngens).
fn fox_row(g: &FiniteGroup, gens: &[usize], w: &Word) -> Vec<i128> {
    let n = g.order();
    let mut row = vec![0i128; n * gens.len()];
    let mut prefix = g.identity();
    for &(i, pos) in w {
        if pos {
            row[i * n + prefix] += 1;
            prefix = g.mul(prefix, gens[i]);
        } else {
            prefix = g.mul(prefix, g.inv(gens[i]));
            row[i * n + prefix] -= 1;
        }
    }
    row
}

/// Left multiplication by a group element on ZG^k.
fn act(g: &FiniteGroup, h: usize, v: &[i128]) -> Vec<i128> {
    let n = g.order();
    let mut out = vec![0; v.len()];
    for (idx, &c) in v.iter().enumerate() {
        if c != 0 {
            let (block, x) = (idx / n, idx % n);
            out[block * n + g.mul(h, x)] += c;
        }
    }
    out
}

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (d, x, y) = egcd(b, a.rem_euclid(b));
        (d, y, x - a.div_euclid(b) * y)
    }
}

/// Row-echelon lattice basis, built incrementally.
#[derive(Default)]
struct Lattice {
    rows: Vec<(usize, Vec<i128>)>,
}

impl Lattice {
    fn insert(&mut self, mut v: Vec<i128>) {
        loop {
            let Some(c) = v.iter().position(|&x| x != 0) else {
                return;
            };
            match self.rows.binary_search_by_key(&c, |(p, _)| *p) {
                Ok(at) => {
                    let b = &mut self.rows[at].1;
                    let (d, s, t) = egcd(b[c], v[c]);
                    let (bp, vp) = (b[c] / d, v[c] / d);
                    let new_b: Vec<i128> = b.iter().zip(&v).map(|(x, y)| s * x + t * y).collect();
                    v = b.iter().zip(&v).map(|(x, y)| bp * y - vp * x).collect();
                    *b = new_b;
                    self.reduce_above(at);
                }
                Err(at) => {
                    self.rows.insert(at, (c, v));
                    self.reduce_above(at);
                    return;
                }
            }
        }
    }

    /// Keeps entries above each pivot small.
    fn reduce_above(&mut self, at: usize) {
        let (p, pivot_row) = self.rows[at].clone();
        for (_, row) in self.rows[..at].iter_mut() {
            let q = row[p].div_euclid(pivot_row[p]);
            if q != 0 {
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= q * y;
                }
            }
        }
    }

    fn basis(&self) -> Vec<Vec<i128>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }

    /// Integer coordinates of a lattice vector in this echelon basis.
    fn coordinates(&self, mut y: Vec<i128>) -> Vec<i128> {
        let mut out = Vec::with_capacity(self.rows.len());
        for (p, row) in &self.rows {
            assert_eq!(y[*p] % row[*p], 0, "vector outside the lattice");
            let c = y[*p] / row[*p];
            for (a, b) in y.iter_mut().zip(row) {
                *a -= c * b;
            }
            out.push(c);
        }
        assert!(y.iter().all(|&x| x == 0), "vector outside the lattice");
        out
    }
}

pub fn hopf_h2(g: &FiniteGroup, relators: &[&str]) -> FGAbelian {
    let n = g.order();
    let ngens = relators
        .iter()
        .flat_map(|r| r.chars())
        .map(|c| (c.to_ascii_lowercase() as u8 - b'a') as usize)
        .max()
        .unwrap()
        + 1;
    let words: Vec<Word> = relators.iter().map(|r| word(r)).collect();

    // generators in G satisfying the relators and generating G
    let mut found = None;
    let mut choice = vec![0usize; ngens];
    'search: loop {
        if words.iter().all(|w| eval(g, &choice, w) == g.identity())
            && g.generate(&choice).len() == n
        {
            found = Some(choice.clone());
            break;
        }
        let mut i = 0;
        while i < ngens {
            choice[i] += 1;
            if choice[i] < n {
                continue 'search;
            }
            choice[i] = 0;
            i += 1;
        }
        break;
    }
    let gens = found.expect("presentation maps onto the group");

    let mut m = Lattice::default();
    for w in &words {
        let row = fox_row(g, &gens, w);
        for h in 0..n {
            m.insert(act(g, h, &row));
        }
    }
    let m_basis = m.basis();
    // M cap ker eps, from the echelon form of [eps(b) | e_b]
    let mut aug = Lattice::default();
    for (i, b) in m_basis.iter().enumerate() {
        let mut v: Vec<i128> = (0..ngens)
            .map(|j| b[j * n..(j + 1) * n].iter().sum())
            .collect();
        v.extend((0..m_basis.len()).map(|t| i128::from(t == i)));
        aug.insert(v);
    }
    let mut k = Lattice::default();
    for row in aug.basis() {
        if row[..ngens].iter().all(|&x| x == 0) {
            let coeffs = &row[ngens..];
            let mut v = vec![0i128; n * ngens];
            for (c, b) in coeffs.iter().zip(&m_basis) {
                for (x, y) in v.iter_mut().zip(b) {
                    *x += c * y;
                }
            }
            k.insert(v);
        }
    }
    // I M in coordinates of the kernel lattice
    let mut im = Lattice::default();
    for b in &m_basis {
        for h in 0..n {
            let moved: Vec<i128> = act(g, h, b).iter().zip(b).map(|(x, y)| x - y).collect();
            im.insert(k.coordinates(moved));
        }
    }
    let rows: Vec<Vec<i64>> = (0..k.rows.len())
        .map(|i| im.basis().iter().map(|col| col[i] as i64).collect())
        .collect();
    if rows.is_empty() {
        return FGAbelian::trivial();
    }
    let d = smith_normal_form(&IntMatrix::from_rows(&rows)).diagonal();
    let mut torsion: Vec<u64> = d
        .iter()
        .map(|x| x.to_u64().unwrap())
        .filter(|&x| x != 1)
        .collect();
    assert!(
        torsion.iter().all(|&x| x != 0),
        "Schur multiplier is finite"
    );
    assert_eq!(d.len(), k.rows.len());
    torsion.sort_unstable();
    FGAbelian::new(0, &torsion)
}

// ---------------------------------------------------------------------------
// Hopf-type formulas through the Cayley graph, over Z/p^a

/// Edge lattice `ZG^g` of the right Cayley graph: coordinate `j * n + h` is the edge `h -> h x_j`.
struct CayleyLattice<'a> {
    g: &'a FiniteGroup,
    gens: Vec<usize>,
    /// Fox derivative of the tree word reaching each element.
    path: Vec<Vec<i64>>,
}

impl<'a> CayleyLattice<'a> {
    fn new(g: &'a FiniteGroup) -> Self {
        let n = g.order();
        let mut gens = Vec::new();
        for x in 0..n {
            if !g.generate(&gens).contains(&x) {
                gens.push(x);
            }
        }
        let width = gens.len() * n;
        let mut path: Vec<Option<Vec<i64>>> = vec![None; n];
        path[g.identity()] = Some(vec![0; width]);
        let mut queue = std::collections::VecDeque::from([g.identity()]);
        while let Some(h) = queue.pop_front() {
            for (j, &x) in gens.iter().enumerate() {
                let k = g.mul(h, x);
                if path[k].is_none() {
                    let mut p = path[h].clone().unwrap();
                    p[j * n + h] += 1;
                    path[k] = Some(p);
                    queue.push_back(k);
                }
            }
        }
        CayleyLattice {
            g,
            gens,
            path: path.into_iter().map(Option::unwrap).collect(),
        }
    }

    fn width(&self) -> usize {
        self.gens.len() * self.g.order()
    }

    /// Left multiplication by `h`.
    fn act(&self, h: usize, v: &[i64]) -> Vec<i64> {
        let n = self.g.order();
        let mut out = vec![0; v.len()];
        for (c, &x) in v.iter().enumerate() {
            out[(c / n) * n + self.g.mul(h, c % n)] += x;
        }
        out
    }

    fn combine(&self, terms: &[(i64, usize, &[i64])]) -> Vec<i64> {
        let mut out = vec![0; self.width()];
        for &(c, h, v) in terms {
            for (o, x) in out.iter_mut().zip(self.act(h, v)) {
                *o += c * x;
            }
        }
        out
    }

    /// Z-basis of the relation module: one closed loop per non-tree edge.
    fn cycles(&self) -> Vec<Vec<i64>> {
        let n = self.g.order();
        let mut out = Vec::new();
        for h in 0..n {
            for (j, &x) in self.gens.iter().enumerate() {
                let mut row = self.path[h].clone();
                row[j * n + h] += 1;
                for (r, p) in row.iter_mut().zip(&self.path[self.g.mul(h, x)]) {
                    *r -= p;
                }
                if row.iter().any(|&c| c != 0) {
                    out.push(row);
                }
            }
        }
        out
    }

    /// Fox derivative of `[w_x, w_y]` for commuting `x, y`.
    fn commutator(&self, x: usize, y: usize) -> Vec<i64> {
        let (xi, yi) = (self.g.inv(x), self.g.inv(y));
        let (px, py) = (&self.path[x][..], &self.path[y][..]);
        let xy = self.g.mul(xi, yi);
        self.combine(&[(1, xy, px), (-1, xi, px), (1, yi, py), (-1, xy, py)])
    }
}

/// Nonzero `p`-adic valuations below `a` of the invariant factors of the row span, over `Z/p^a`,
/// plus the number of columns left without a pivot.
fn local_invariants(mut rows: Vec<Vec<u64>>, cols: usize, p: u64, a: u32) -> (Vec<u32>, usize) {
    let q = p.pow(a);
    let val = |x: u64| {
        if x == 0 {
            a
        } else {
            (0..a).find(|&v| !x.is_multiple_of(p.pow(v + 1))).unwrap()
        }
    };
    let inverse = |u: u64| {
        let (mut r, mut b, mut e) = (
            1u128,
            u as u128,
            q as u128 / p as u128 * (p as u128 - 1) - 1,
        );
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % q as u128;
            }
            b = b * b % q as u128;
            e >>= 1;
        }
        r as u64
    };
    let mut found = Vec::new();
    let mut free_cols: Vec<usize> = (0..cols).collect();
    loop {
        let best = rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| free_cols.iter().map(move |&c| (val(row[c]), r, c)))
            .min();
        let Some((v, r, c)) = best.filter(|b| b.0 < a) else {
            break;
        };
        let pivot = rows.swap_remove(r);
        let unit = inverse(pivot[c] / p.pow(v));
        let pivot: Vec<u64> = pivot
            .iter()
            .map(|&x| ((x as u128 * unit as u128) % q as u128) as u64)
            .collect();
        for row in rows.iter_mut() {
            let f = row[c] / p.pow(v);
            if f != 0 {
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = ((*x as u128 + (q - f) as u128 * y as u128) % q as u128) as u64;
                }
            }
        }
        // column operations clear the rest of the pivot row without touching other rows
        free_cols.retain(|&k| k != c);
        if v > 0 {
            found.push(v);
        }
    }
    found.sort_unstable();
    (found, free_cols.len())
}

fn torsion_of_quotient(lattice: &CayleyLattice, rows: Vec<Vec<i64>>, p: u64, a: u32) -> FGAbelian {
    let q = p.pow(a) as i64;
    let rows = rows
        .into_iter()
        .map(|r| r.into_iter().map(|x| x.rem_euclid(q) as u64).collect())
        .collect();
    let (vals, free) = local_invariants(rows, lattice.width(), p, a);
    // the quotient has rank |G| - 1 + g; any other count means the torsion reached p^a
    assert_eq!(
        free,
        lattice.g.order() - 1 + lattice.gens.len(),
        "precision p^{a} too small"
    );
    assert!(vals.iter().all(|&v| v + 1 < a), "precision p^{a} too small");
    let torsion: Vec<u64> = vals.iter().map(|&v| p.pow(v)).collect();
    FGAbelian::new(0, &torsion)
}

fn augmentation_span(lattice: &CayleyLattice) -> Vec<Vec<i64>> {
    let e = lattice.g.identity();
    let cycles = lattice.cycles();
    let mut rows = Vec::new();
    for &x in &lattice.gens {
        for c in &cycles {
            rows.push(lattice.combine(&[(1, x, c), (-1, e, c)]));
        }
    }
    rows
}

/// `p`-part of `H_2(G, Z)` as the torsion of `ZG^g / I.R^ab`, working modulo `p^a`.
pub fn cycle_space_h2(g: &FiniteGroup, p: u64, a: u32) -> FGAbelian {
    let lattice = CayleyLattice::new(g);
    let rows = augmentation_span(&lattice);
    torsion_of_quotient(&lattice, rows, p, a)
}

/// `p`-part of `B_0(G)`: as above, additionally killing the images of commutators of
/// commuting pairs.
pub fn commutator_quotient_b0_at(g: &FiniteGroup, p: u64, a: u32) -> FGAbelian {
    let lattice = CayleyLattice::new(g);
    let mut rows = augmentation_span(&lattice);
    let n = g.order();
    for x in 0..n {
        for y in x + 1..n {
            if g.commute(x, y) {
                rows.push(lattice.commutator(x, y));
            }
        }
    }
    torsion_of_quotient(&lattice, rows, p, a)
}

/// `B_0` of a 2-group, modulo `2^12`.
pub fn commutator_quotient_b0(g: &FiniteGroup) -> FGAbelian {
    commutator_quotient_b0_at(g, 2, 12)
}
