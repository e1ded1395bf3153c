//! Finite groups given by Cayley tables or permutation generators.
//!
//! Elements are indices `0..order`. Every constructor fixes a canonical
//! element ordering so that fingerprints and cached results are stable.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};
use thiserror::Error;

/// Largest order `group_from_permutations` will enumerate unless told otherwise.
pub const DEFAULT_CLOSURE_CAP: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("table is empty")]
    EmptyTable,
    #[error("table is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("entry {value} at ({row}, {col}) is out of range for order {order}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },
    #[error("table is not a Latin square: {line} {index} repeats element {value}")]
    NotLatinSquare {
        line: &'static str,
        index: usize,
        value: usize,
    },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("expected {expected} element names, got {got}")]
    NameCount { expected: usize, got: usize },
    #[error("generator {index} is not a permutation of 0..{degree}")]
    NotAPermutation { index: usize, degree: usize },
    #[error("closure exceeds the order cap {cap}")]
    ClosureTooLarge { cap: usize },
    #[error("unknown builtin group `{0}`")]
    UnknownName(String),
    #[error("bad parameters for builtin group: {0}")]
    BadParams(String),
}

/// Where a group came from. Catalog lookups match on this, never on the table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Table,
    Permutations,
    Builtin(Builtin),
}

/// A finite group stored as a full multiplication table.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    names: Vec<String>,
    identity: usize,
    inverses: Vec<usize>,
    origin: Origin,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Validates a Cayley table. `names`, when given, must have one entry per element.
    pub fn from_table(
        table: &[Vec<usize>],
        names: Option<Vec<String>>,
    ) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::EmptyTable);
        }
        let mut flat = Vec::with_capacity(n * n);
        for (row, entries) in table.iter().enumerate() {
            if entries.len() != n {
                return Err(GroupError::NotSquare {
                    row,
                    len: entries.len(),
                    expected: n,
                });
            }
            for (col, &value) in entries.iter().enumerate() {
                if value >= n {
                    return Err(GroupError::EntryOutOfRange {
                        row,
                        col,
                        value,
                        order: n,
                    });
                }
                flat.push(value as u32);
            }
        }
        let names = match names {
            Some(names) if names.len() != n => {
                return Err(GroupError::NameCount {
                    expected: n,
                    got: names.len(),
                })
            }
            Some(names) => names,
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        Self::from_flat(n, flat, names, Origin::Table)
    }

    fn from_flat(
        order: usize,
        table: Vec<u32>,
        names: Vec<String>,
        origin: Origin,
    ) -> Result<Self, GroupError> {
        let n = order;
        let at = |a: usize, b: usize| table[a * n + b] as usize;

        let mut seen = vec![usize::MAX; n];
        for row in 0..n {
            for col in 0..n {
                let v = at(row, col);
                if seen[v] == row {
                    return Err(GroupError::NotLatinSquare {
                        line: "row",
                        index: row,
                        value: v,
                    });
                }
                seen[v] = row;
            }
        }
        seen.fill(usize::MAX);
        for col in 0..n {
            for row in 0..n {
                let v = at(row, col);
                if seen[v] == col {
                    return Err(GroupError::NotLatinSquare {
                        line: "column",
                        index: col,
                        value: v,
                    });
                }
                seen[v] = col;
            }
        }

        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or(GroupError::NoIdentity)?;

        // Light's test: a product of middle-associative elements is middle-associative,
        // so checking the middle slot over a generating set covers every triple.
        for s in magma_generators(n, identity, &at) {
            for a in 0..n {
                let as_ = at(a, s);
                for c in 0..n {
                    if at(as_, c) != at(a, at(s, c)) {
                        return Err(GroupError::NotAssociative { a, b: s, c });
                    }
                }
            }
        }

        let mut inverses = vec![0; n];
        for (a, inv) in inverses.iter_mut().enumerate() {
            *inv = (0..n)
                .find(|&b| at(a, b) == identity)
                .expect("latin square row contains identity");
        }

        Ok(FiniteGroup {
            order,
            table,
            names,
            identity,
            inverses,
            origin,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    pub(crate) fn with_origin(mut self, origin: Origin) -> Self {
        self.origin = origin;
        self
    }

    /// The table as nested rows, e.g. for serialization.
    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table
            .chunks(self.order)
            .map(|r| r.iter().map(|&x| x as usize).collect())
            .collect()
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.commute(a, b)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Hex SHA-256 of the canonical table serialization (order, then row-major entries, little endian).
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update((self.order as u64).to_le_bytes());
        for &x in &self.table {
            hasher.update(x.to_le_bytes());
        }
        hex::encode(hasher.finalize())
    }

    /// Sorted member list of the subgroup generated by `gens`.
    pub fn generate(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order];
        inside[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !inside[y] {
                    inside[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order).filter(|&i| inside[i]).collect()
    }

    /// Greedy generating set: scan elements in index order, keep those not yet generated.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut inside = vec![false; self.order];
        inside[self.identity] = true;
        for g in 0..self.order {
            if !inside[g] {
                gens.push(g);
                for x in self.generate(&gens) {
                    inside[x] = true;
                }
            }
        }
        gens
    }

    pub fn whole(&self) -> Subgroup<'_> {
        Subgroup {
            parent: self,
            members: (0..self.order).collect(),
        }
    }

    /// Wraps a member list as a subgroup after checking closure.
    pub fn subgroup(&self, members: &[usize]) -> Option<Subgroup<'_>> {
        let mut members = members.to_vec();
        members.sort_unstable();
        members.dedup();
        let set: HashSet<usize> = members.iter().copied().collect();
        let closed = set.contains(&self.identity)
            && members.iter().all(|&a| set.contains(&self.inv(a)))
            && members
                .iter()
                .all(|&a| members.iter().all(|&b| set.contains(&self.mul(a, b))));
        closed.then_some(Subgroup {
            parent: self,
            members,
        })
    }
}

fn magma_generators(n: usize, identity: usize, at: &impl Fn(usize, usize) -> usize) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut inside = vec![false; n];
    inside[identity] = true;
    let mut members = vec![identity];
    for g in 0..n {
        if inside[g] {
            continue;
        }
        gens.push(g);
        let mut queue: VecDeque<usize> = members.iter().copied().collect();
        while let Some(x) = queue.pop_front() {
            for &s in &gens {
                for y in [at(x, s), at(s, x)] {
                    if !inside[y] {
                        inside[y] = true;
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
        }
    }
    gens
}

/// Subgroup of a parent group, stored as a sorted list of parent indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup<'g> {
    parent: &'g FiniteGroup,
    members: Vec<usize>,
}

impl<'g> Subgroup<'g> {
    pub fn parent(&self) -> &'g FiniteGroup {
        self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members.binary_search(&a).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup<'_>) -> bool {
        self.members.iter().all(|&a| other.contains(a))
    }

    pub fn is_abelian(&self) -> bool {
        let g = self.parent;
        self.members
            .iter()
            .enumerate()
            .all(|(i, &a)| self.members[i + 1..].iter().all(|&b| g.commute(a, b)))
    }

    /// The subgroup as a standalone group; element `i` corresponds to parent element `members()[i]`.
    pub fn to_group(&self) -> FiniteGroup {
        let g = self.parent;
        let n = self.members.len();
        let index: HashMap<usize, usize> = self
            .members
            .iter()
            .enumerate()
            .map(|(i, &a)| (a, i))
            .collect();
        let mut table = Vec::with_capacity(n * n);
        for &a in &self.members {
            for &b in &self.members {
                table.push(index[&g.mul(a, b)] as u32);
            }
        }
        let names = self
            .members
            .iter()
            .map(|&a| g.name(a).to_string())
            .collect();
        FiniteGroup::from_flat(n, table, names, Origin::Table)
            .expect("subgroup of a valid group is a group")
    }
}

/// Elements commuting with every element of `set`. An empty set centralizes everything.
pub fn centralizer<'g>(group: &'g FiniteGroup, set: &[usize]) -> Subgroup<'g> {
    let members = (0..group.order())
        .filter(|&g| set.iter().all(|&s| group.commute(g, s)))
        .collect();
    Subgroup {
        parent: group,
        members,
    }
}

/// Abelian subgroups that are maximal under inclusion, sorted by (order, members).
///
/// An abelian subgroup `A` is maximal exactly when its centralizer equals `A`.
/// The search grows cyclic seeds by adjoining centralizing elements, memoizing
/// every member set it has visited.
pub fn maximal_abelian_subgroups(group: &FiniteGroup) -> Vec<Subgroup<'_>> {
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut maximal: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
    let mut stack: Vec<Vec<usize>> = Vec::new();
    for g in 0..group.order() {
        let seed = group.generate(&[g]);
        if seen.insert(seed.clone()) {
            stack.push(seed);
        }
    }
    while let Some(current) = stack.pop() {
        let cent = centralizer(group, &current);
        if cent.order() == current.len() {
            maximal.insert((current.len(), current));
            continue;
        }
        let inside: HashSet<usize> = current.iter().copied().collect();
        for &x in cent.members() {
            if inside.contains(&x) {
                continue;
            }
            let grown = adjoin_commuting(group, &current, x);
            if seen.insert(grown.clone()) {
                stack.push(grown);
            }
        }
    }
    maximal
        .into_iter()
        .map(|(_, members)| Subgroup {
            parent: group,
            members,
        })
        .collect()
}

/// `<A, x>` for an abelian subgroup `A` and an element `x` centralizing it.
fn adjoin_commuting(group: &FiniteGroup, a: &[usize], x: usize) -> Vec<usize> {
    let inside: HashSet<usize> = a.iter().copied().collect();
    let mut out: BTreeSet<usize> = a.iter().copied().collect();
    let mut power = x;
    while !inside.contains(&power) {
        for &m in a {
            out.insert(group.mul(m, power));
        }
        power = group.mul(power, x);
    }
    out.into_iter().collect()
}

/// Closure of one-line permutations under composition, `(a*b)(i) = a(b(i))`.
///
/// Elements are numbered breadth-first from the identity, extending by right
/// multiplication with the generators in input order.
pub fn group_from_permutations(
    generators: &[Vec<usize>],
    cap: usize,
) -> Result<FiniteGroup, GroupError> {
    let degree = generators.first().map_or(0, Vec::len);
    for (index, g) in generators.iter().enumerate() {
        let mut hit = vec![false; degree];
        let ok = g.len() == degree
            && g.iter()
                .all(|&x| x < degree && !std::mem::replace(&mut hit[x], true));
        if !ok {
            return Err(GroupError::NotAPermutation { index, degree });
        }
    }
    let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { b.iter().map(|&i| a[i]).collect() };

    let identity: Vec<usize> = (0..degree).collect();
    let mut elements = vec![identity.clone()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
    let mut cursor = 0;
    while cursor < elements.len() {
        for g in generators {
            let y = compose(&elements[cursor], g);
            if !index.contains_key(&y) {
                if elements.len() == cap {
                    return Err(GroupError::ClosureTooLarge { cap });
                }
                index.insert(y.clone(), elements.len());
                elements.push(y);
            }
        }
        cursor += 1;
    }

    let n = elements.len();
    let mut table = Vec::with_capacity(n * n);
    for a in &elements {
        for b in &elements {
            table.push(index[&compose(a, b)] as u32);
        }
    }
    let names = elements.iter().map(|p| cycle_notation(p)).collect();
    FiniteGroup::from_flat(n, table, names, Origin::Permutations)
}

fn cycle_notation(p: &[usize]) -> String {
    let mut done = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if done[start] || p[start] == start {
            continue;
        }
        let mut cycle = vec![start];
        done[start] = true;
        let mut x = p[start];
        while x != start {
            done[x] = true;
            cycle.push(x);
            x = p[x];
        }
        let parts: Vec<String> = cycle.iter().map(ToString::to_string).collect();
        out.push_str(&format!("({})", parts.join(" ")));
    }
    if out.is_empty() {
        "()".to_string()
    } else {
        out
    }
}

/// Named groups with a documented element order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Builtin {
    /// `g^k` at index `k`.
    Cyclic(usize),
    /// Dihedral group of order `2n`: rotations `r^k` at `k`, reflections `s r^k` at `n + k`.
    Dihedral(usize),
    /// Permutations of `n` points generated by `(0 1)` and `(0 1 .. n-1)`, breadth-first.
    Symmetric(usize),
    /// `1, i, j, k, -1, -i, -j, -k`.
    Quaternion8,
    /// Vectors of `(Z/p)^k` in lexicographic order.
    ElementaryAbelian { p: usize, k: u32 },
    /// Upper unitriangular 3x3 matrices over `Z/p`, `(a, b, c)` in lexicographic order
    /// with `a`, `b` above the diagonal and `c` in the corner.
    Heisenberg(usize),
    /// Pairs `(g, h)` at index `g * |H| + h`.
    DirectProduct(Box<Builtin>, Box<Builtin>),
}

impl Builtin {
    pub fn build(&self) -> Result<FiniteGroup, GroupError> {
        let group = match self {
            Builtin::Cyclic(n) => {
                let n = *n;
                if n == 0 {
                    return Err(GroupError::BadParams(
                        "cyclic order must be positive".into(),
                    ));
                }
                let names = (0..n).map(|k| power_name("g", k)).collect();
                let table = (0..n)
                    .flat_map(|a| (0..n).map(move |b| ((a + b) % n) as u32))
                    .collect();
                FiniteGroup::from_flat(n, table, names, Origin::Table)?
            }
            Builtin::Dihedral(n) => {
                let n = *n;
                if n == 0 {
                    return Err(GroupError::BadParams(
                        "dihedral parameter must be positive".into(),
                    ));
                }
                let decode = |x: usize| (x / n, x % n);
                let encode = |s: usize, r: usize| (s * n + r) as u32;
                let mut table = Vec::with_capacity(4 * n * n);
                for x in 0..2 * n {
                    let (s1, r1) = decode(x);
                    for y in 0..2 * n {
                        let (s2, r2) = decode(y);
                        // s^a r^b s^c r^d = s^(a+c) r^((-1)^c b + d)
                        let r = if s2 == 1 { (n - r1) % n + r2 } else { r1 + r2 } % n;
                        table.push(encode((s1 + s2) % 2, r));
                    }
                }
                let names = (0..2 * n)
                    .map(|x| {
                        let (s, r) = decode(x);
                        match (s, r) {
                            (0, _) => power_name("r", r),
                            (_, 0) => "s".to_string(),
                            _ => format!("s{}", power_name("r", r)),
                        }
                    })
                    .collect();
                FiniteGroup::from_flat(2 * n, table, names, Origin::Table)?
            }
            Builtin::Symmetric(n) => {
                let n = *n;
                if n == 0 {
                    return Err(GroupError::BadParams(
                        "symmetric degree must be positive".into(),
                    ));
                }
                let mut gens = Vec::new();
                if n >= 2 {
                    let mut swap: Vec<usize> = (0..n).collect();
                    swap.swap(0, 1);
                    gens.push(swap);
                }
                if n >= 3 {
                    gens.push((0..n).map(|i| (i + 1) % n).collect());
                }
                group_from_permutations(&gens, DEFAULT_CLOSURE_CAP)?
            }
            Builtin::Quaternion8 => {
                // units (sign, axis) with axis 0 = 1, 1 = i, 2 = j, 3 = k
                let unit = |x: usize| (x / 4, x % 4);
                let axis_mul = |a: usize, b: usize| -> (usize, usize) {
                    match (a, b) {
                        (0, b) => (0, b),
                        (a, 0) => (0, a),
                        (a, b) if a == b => (1, 0),
                        (1, 2) => (0, 3),
                        (2, 3) => (0, 1),
                        (3, 1) => (0, 2),
                        (2, 1) => (1, 3),
                        (3, 2) => (1, 1),
                        (1, 3) => (1, 2),
                        _ => unreachable!(),
                    }
                };
                let mut table = Vec::with_capacity(64);
                for x in 0..8 {
                    let (sx, ax) = unit(x);
                    for y in 0..8 {
                        let (sy, ay) = unit(y);
                        let (s, a) = axis_mul(ax, ay);
                        table.push((((sx + sy + s) % 2) * 4 + a) as u32);
                    }
                }
                let names = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect();
                FiniteGroup::from_flat(8, table, names, Origin::Table)?
            }
            Builtin::ElementaryAbelian { p, k } => {
                let (p, k) = (*p, *k);
                if !is_prime(p as u64) {
                    return Err(GroupError::BadParams(format!("{p} is not prime")));
                }
                let n = p
                    .checked_pow(k)
                    .filter(|&n| n <= DEFAULT_CLOSURE_CAP)
                    .ok_or_else(|| {
                        GroupError::BadParams(format!("{p}^{k} exceeds the order cap"))
                    })?;
                let digits = |mut x: usize| -> Vec<usize> {
                    let mut d = vec![0; k as usize];
                    for slot in d.iter_mut().rev() {
                        *slot = x % p;
                        x /= p;
                    }
                    d
                };
                let mut table = Vec::with_capacity(n * n);
                for x in 0..n {
                    let dx = digits(x);
                    for y in 0..n {
                        let dy = digits(y);
                        let z = dx
                            .iter()
                            .zip(&dy)
                            .fold(0, |acc, (a, b)| acc * p + (a + b) % p);
                        table.push(z as u32);
                    }
                }
                let names = (0..n)
                    .map(|x| {
                        format!(
                            "({})",
                            digits(x)
                                .iter()
                                .map(ToString::to_string)
                                .collect::<Vec<_>>()
                                .join(",")
                        )
                    })
                    .collect();
                FiniteGroup::from_flat(n, table, names, Origin::Table)?
            }
            Builtin::Heisenberg(p) => {
                let p = *p;
                if !is_prime(p as u64) {
                    return Err(GroupError::BadParams(format!("{p} is not prime")));
                }
                let n = p * p * p;
                let decode = |x: usize| (x / (p * p), (x / p) % p, x % p);
                let mut table = Vec::with_capacity(n * n);
                for x in 0..n {
                    let (a, b, c) = decode(x);
                    for y in 0..n {
                        let (a2, b2, c2) = decode(y);
                        // [[1,a,c],[0,1,b],[0,0,1]] * [[1,a',c'],[0,1,b'],[0,0,1]]
                        let (a3, b3, c3) = ((a + a2) % p, (b + b2) % p, (c + c2 + a * b2) % p);
                        table.push((a3 * p * p + b3 * p + c3) as u32);
                    }
                }
                let names = (0..n)
                    .map(|x| {
                        let (a, b, c) = decode(x);
                        format!("[{a},{b},{c}]")
                    })
                    .collect();
                FiniteGroup::from_flat(n, table, names, Origin::Table)?
            }
            Builtin::DirectProduct(g, h) => direct_product(&g.build()?, &h.build()?),
        };
        Ok(group.with_origin(Origin::Builtin(self.clone())))
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Cyclic(n) => write!(f, "cyclic({n})"),
            Builtin::Dihedral(n) => write!(f, "dihedral({n})"),
            Builtin::Symmetric(n) => write!(f, "symmetric({n})"),
            Builtin::Quaternion8 => write!(f, "quaternion8"),
            Builtin::ElementaryAbelian { p, k } => write!(f, "elementary_abelian({p},{k})"),
            Builtin::Heisenberg(p) => write!(f, "heisenberg({p})"),
            Builtin::DirectProduct(g, h) => write!(f, "direct_product({g},{h})"),
        }
    }
}

impl FromStr for Builtin {
    type Err = GroupError;

    /// Parses the `Display` form, e.g. `direct_product(cyclic(2),symmetric(3))`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (name, args) = match s.find('(') {
            Some(open) => {
                let close = s.rfind(')').filter(|&c| c == s.len() - 1).ok_or_else(|| {
                    GroupError::BadParams(format!("unbalanced parentheses in `{s}`"))
                })?;
                (s[..open].trim(), split_top_level(&s[open + 1..close]))
            }
            None => (s, Vec::new()),
        };
        if name == "direct_product" {
            if args.len() != 2 {
                return Err(GroupError::BadParams(
                    "direct_product takes two groups".into(),
                ));
            }
            return Ok(Builtin::DirectProduct(
                Box::new(args[0].parse()?),
                Box::new(args[1].parse()?),
            ));
        }
        let params = args
            .iter()
            .map(|a| {
                a.trim().parse::<u64>().map_err(|_| {
                    GroupError::BadParams(format!("`{a}` is not a nonnegative integer"))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        builtin(name, &params)
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    if !s[start..].trim().is_empty() || !parts.is_empty() {
        parts.push(s[start..].trim());
    }
    parts
}

/// Builtin by name: `cyclic n`, `dihedral n`, `symmetric n`, `quaternion8`,
/// `elementary_abelian p k`, `heisenberg p`.
pub fn builtin(name: &str, params: &[u64]) -> Result<Builtin, GroupError> {
    let want = |k: usize| -> Result<(), GroupError> {
        if params.len() == k {
            Ok(())
        } else {
            Err(GroupError::BadParams(format!(
                "`{name}` takes {k} parameter(s), got {}",
                params.len()
            )))
        }
    };
    let b = match name {
        "cyclic" => {
            want(1)?;
            Builtin::Cyclic(params[0] as usize)
        }
        "dihedral" => {
            want(1)?;
            Builtin::Dihedral(params[0] as usize)
        }
        "symmetric" => {
            want(1)?;
            Builtin::Symmetric(params[0] as usize)
        }
        "quaternion8" => {
            want(0)?;
            Builtin::Quaternion8
        }
        "elementary_abelian" => {
            want(2)?;
            Builtin::ElementaryAbelian {
                p: params[0] as usize,
                k: params[1] as u32,
            }
        }
        "heisenberg" => {
            want(1)?;
            Builtin::Heisenberg(params[0] as usize)
        }
        "direct_product" => {
            return Err(GroupError::BadParams(
                "use the direct_product(g,h) form".into(),
            ))
        }
        other => return Err(GroupError::UnknownName(other.to_string())),
    };
    Ok(b)
}

/// `builtin(name, params)` followed by construction.
pub fn builtin_group(name: &str, params: &[u64]) -> Result<FiniteGroup, GroupError> {
    builtin(name, params)?.build()
}

/// `G x H` with `(g, h)` at index `g * |H| + h`.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
    let (m, n) = (g.order(), h.order());
    let mut table = Vec::with_capacity(m * n * m * n);
    for a in 0..m * n {
        for b in 0..m * n {
            table.push((g.mul(a / n, b / n) * n + h.mul(a % n, b % n)) as u32);
        }
    }
    let names = (0..m * n)
        .map(|x| format!("({},{})", g.name(x / n), h.name(x % n)))
        .collect();
    FiniteGroup::from_flat(m * n, table, names, Origin::Table)
        .expect("product of groups is a group")
}

fn power_name(base: &str, k: usize) -> String {
    match k {
        0 => "e".to_string(),
        1 => base.to_string(),
        k => format!("{base}^{k}"),
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}
