//! Linear algebra over `Z/p^a`.
//!
//! Cochain spaces are free `Z/m`-modules; after splitting `m` into prime powers
//! every computation happens over a local ring, where ideals are totally
//! ordered by valuation and a minimal-valuation pivot always divides its row
//! and column.

/// Sparse row: `(column, value)` pairs with values already reduced.
pub type SparseRow = Vec<(usize, u64)>;

/// `Z/p^a` arithmetic on `u64` representatives in `[0, p^a)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalRing {
    p: u64,
    a: u32,
    q: u64,
}

impl LocalRing {
    pub fn new(p: u64, a: u32) -> Self {
        let q = p
            .checked_pow(a)
            .filter(|&q| q < (1 << 31))
            .expect("modulus must stay below 2^31");
        LocalRing { p, a, q }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.a
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// p-adic valuation, `a` for zero.
    pub fn val(&self, x: u64) -> u32 {
        if x == 0 {
            return self.a;
        }
        let mut v = 0;
        let mut x = x;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        v
    }

    #[inline]
    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.q as i64) as u64
    }

    #[inline]
    pub fn mul(&self, x: u64, y: u64) -> u64 {
        x * y % self.q
    }

    #[inline]
    pub fn neg(&self, x: u64) -> u64 {
        (self.q - x) % self.q
    }

    /// Some `t` with `t * y == x`; requires `val(y) <= val(x)` and `y != 0`.
    pub fn div(&self, x: u64, y: u64) -> u64 {
        let v = self.val(y);
        debug_assert!(
            v < self.a && self.val(x) >= v,
            "division needs val(y) <= val(x)"
        );
        let pv = self.p.pow(v);
        let unit = y / pv;
        self.mul(x / pv, self.unit_inverse(unit))
    }

    fn unit_inverse(&self, u: u64) -> u64 {
        let (mut r0, mut r1) = (self.q as i64, (u % self.q) as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let k = r0 / r1;
            (r0, r1) = (r1, r0 - k * r1);
            (t0, t1) = (t1, t0 - k * t1);
        }
        debug_assert_eq!(r0, 1, "{u} is not a unit mod {}", self.q);
        self.reduce(t0)
    }

    /// `dst -= t * src`, entrywise.
    #[inline]
    fn axpy(&self, dst: &mut [u64], t: u64, src: &[u64]) {
        if t == 0 {
            return;
        }
        let s = self.q - t;
        for (d, &x) in dst.iter_mut().zip(src) {
            if x != 0 {
                *d = (*d + s * x) % self.q;
            }
        }
    }
}

/// Kernel of a matrix over `Z/p^a`, with coordinates that identify it with
/// `(+)_i Z/p^{w_i}`.
///
/// Internally `A V = U^{-1} D` with `D` diagonal; in `y = V^{-1} x` coordinates
/// the kernel is `{ y : y_i in p^(a - w_i) Z/p^a }`.
#[derive(Debug, Clone)]
pub struct LocalKernel {
    ring: LocalRing,
    ncols: usize,
    /// columns of V
    v_cols: Vec<Vec<u64>>,
    /// rows of V^{-1}
    v_inv_rows: Vec<Vec<u64>>,
    /// w_i for every coordinate
    weights: Vec<u32>,
}

impl LocalKernel {
    /// Kernel of the matrix with the given sparse rows and `ncols` columns.
    pub fn compute(
        ring: LocalRing,
        rows: impl IntoIterator<Item = SparseRow>,
        ncols: usize,
    ) -> Self {
        let echelon = echelonize(&ring, rows, ncols);
        let mut e: Vec<Vec<u64>> = echelon.into_iter().flatten().collect();
        let k = e.len();

        let mut v_cols: Vec<Vec<u64>> = (0..ncols).map(|j| unit_vector(ncols, j)).collect();
        let mut v_inv_rows: Vec<Vec<u64>> = (0..ncols).map(|j| unit_vector(ncols, j)).collect();
        let mut weights = vec![ring.exponent(); ncols];

        for t in 0..k.min(ncols) {
            let Some((pi, pj)) = min_valuation_entry(&ring, &e, t) else {
                break;
            };
            e.swap(t, pi);
            if pj != t {
                for row in e.iter_mut() {
                    row.swap(t, pj);
                }
                v_cols.swap(t, pj);
                v_inv_rows.swap(t, pj);
            }
            let pivot = e[t][t];
            weights[t] = ring.val(pivot);

            let (head, tail) = e.split_at_mut(t + 1);
            let pivot_row = &head[t];
            for row in tail.iter_mut() {
                if row[t] != 0 {
                    let c = ring.div(row[t], pivot);
                    ring.axpy(&mut row[t..], c, &pivot_row[t..]);
                }
            }
            // clear the pivot row with column operations, mirrored on V and V^{-1}
            #[allow(clippy::needless_range_loop)]
            for j in t + 1..ncols {
                let x = e[t][j];
                if x == 0 {
                    continue;
                }
                let c = ring.div(x, pivot);
                e[t][j] = 0;
                let (vt, vj) = pair_mut(&mut v_cols, t, j);
                ring.axpy(vj, c, vt);
                // (V E)^{-1} = E^{-1} V^{-1}, E^{-1} adds c * row j to row t
                let (rt, rj) = pair_mut(&mut v_inv_rows, t, j);
                ring.axpy(rt, ring.neg(c), rj);
            }
        }
        LocalKernel {
            ring,
            ncols,
            v_cols,
            v_inv_rows,
            weights,
        }
    }

    pub fn ring(&self) -> LocalRing {
        self.ring
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Exponents `w_i > 0`; the kernel is `(+) Z/p^{w_i}` over these.
    pub fn orders(&self) -> Vec<u32> {
        self.weights.iter().copied().filter(|&w| w > 0).collect()
    }

    /// Kernel generators, one per positive weight, paired with their exponent.
    pub fn generators(&self) -> Vec<(Vec<u64>, u32)> {
        let a = self.ring.exponent();
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0)
            .map(|(i, &w)| {
                let scale = self.ring.prime().pow(a - w) % self.ring.modulus();
                let v = self.v_cols[i]
                    .iter()
                    .map(|&x| self.ring.mul(x, scale))
                    .collect();
                (v, w)
            })
            .collect()
    }

    /// Coordinates of a kernel element against `generators()`, or `None` if `x` is not in the kernel.
    pub fn coordinates(&self, x: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(x.len(), self.ncols);
        let ring = &self.ring;
        let a = ring.exponent();
        let mut out = Vec::new();
        for (i, &w) in self.weights.iter().enumerate() {
            let row = &self.v_inv_rows[i];
            let y = row
                .iter()
                .zip(x)
                .fold(0u64, |acc, (&r, &xi)| (acc + r * xi) % ring.modulus());
            let shift = ring.prime().pow(a - w);
            if y % shift != 0 {
                return None;
            }
            if w > 0 {
                out.push(y / shift);
            }
        }
        Some(out)
    }
}

fn unit_vector(n: usize, j: usize) -> Vec<u64> {
    let mut v = vec![0; n];
    v[j] = 1;
    v
}

fn pair_mut<T>(v: &mut [T], i: usize, j: usize) -> (&mut T, &mut T) {
    assert_ne!(i, j);
    if i < j {
        let (a, b) = v.split_at_mut(j);
        (&mut a[i], &mut b[0])
    } else {
        let (a, b) = v.split_at_mut(i);
        (&mut b[0], &mut a[j])
    }
}

fn min_valuation_entry(ring: &LocalRing, e: &[Vec<u64>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, u32)> = None;
    for (i, row) in e.iter().enumerate().skip(t) {
        for (j, &x) in row.iter().enumerate().skip(t) {
            if x == 0 {
                continue;
            }
            let v = ring.val(x);
            if v == 0 {
                return Some((i, j));
            }
            if best.is_none_or(|b| v < b.2) {
                best = Some((i, j, v));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Row echelon form spanning the same row module, at most one row per leading column.
fn echelonize(
    ring: &LocalRing,
    rows: impl IntoIterator<Item = SparseRow>,
    ncols: usize,
) -> Vec<Option<Vec<u64>>> {
    let mut pivots: Vec<Option<Vec<u64>>> = vec![None; ncols];
    for sparse in rows {
        let mut row = vec![0u64; ncols];
        for (j, x) in sparse {
            row[j] = (row[j] + x) % ring.modulus();
        }
        let mut col = 0;
        while col < ncols {
            if row[col] == 0 {
                col += 1;
                continue;
            }
            match &mut pivots[col] {
                None => {
                    pivots[col] = Some(row);
                    break;
                }
                Some(pivot) => {
                    if ring.val(row[col]) < ring.val(pivot[col]) {
                        std::mem::swap(pivot, &mut row);
                    }
                    let c = ring.div(row[col], pivot[col]);
                    ring.axpy(&mut row[col..], c, &pivot[col..]);
                    col += 1;
                }
            }
        }
    }
    pivots
}
