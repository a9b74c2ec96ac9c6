//! Finite groups given by their multiplication tables.
//!
//! Elements are 0-based indices. The identity is located during validation,
//! so input tables may order elements arbitrarily.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// A validated finite group given by its Cayley table.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupTable {
    n: usize,
    table: Vec<u32>,
    identity: usize,
    inverse: Vec<usize>,
}

impl std::fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroupTable")
            .field("order", &self.n)
            .field("identity", &self.identity)
            .finish()
    }
}

/// Validates a raw table and locates the identity and inverses.
///
/// Associativity is checked on all `n^3` triples.
pub fn validate_table(raw: &[Vec<usize>]) -> Result<GroupTable> {
    let n = raw.len();
    if n == 0 {
        return Err(Error::MalformedTable("empty table".into()));
    }
    let mut table = Vec::with_capacity(n * n);
    for (i, row) in raw.iter().enumerate() {
        if row.len() != n {
            return Err(Error::MalformedTable(format!(
                "row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        for &x in row {
            if x >= n {
                return Err(Error::MalformedTable(format!("entry {x} in row {i}")));
            }
            table.push(x as u32);
        }
    }
    let at = |x: usize, y: usize| table[x * n + y] as usize;

    let identity = (0..n)
        .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
        .ok_or(Error::NoIdentity)?;

    let mut inverse = vec![0; n];
    for x in 0..n {
        inverse[x] = (0..n)
            .find(|&y| at(x, y) == identity && at(y, x) == identity)
            .ok_or(Error::NoInverse { element: x })?;
    }

    for a in 0..n {
        for b in 0..n {
            let ab = at(a, b);
            for c in 0..n {
                if at(ab, c) != at(a, at(b, c)) {
                    return Err(Error::NotAssociative { a, b, c });
                }
            }
        }
    }

    Ok(GroupTable {
        n,
        table,
        identity,
        inverse,
    })
}

impl GroupTable {
    /// Builds a table from a multiplication closure on `0..n`, validating it.
    pub fn from_fn(n: usize, mul: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let raw: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| mul(i, j)).collect()).collect();
        validate_table(&raw)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.n + y] as usize
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inverse[x]
    }

    /// `g^-1 x g`, the right conjugation action.
    #[inline]
    pub fn conj(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn pow(&self, x: usize, e: i64) -> usize {
        let base = if e < 0 { self.inv(x) } else { x };
        let mut acc = self.identity;
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        (0..self.n).fold(1, |acc, x| num_integer::lcm(acc, self.element_order(x)))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|x| (x..self.n).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.mul(i, j)).collect())
            .collect()
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_sorted(self.n, (0..self.n).collect())
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup::from_sorted(self.n, vec![self.identity])
    }

    /// The subgroup as a group in its own right, together with the map from
    /// local indices back to elements of `self`.
    pub fn induced(&self, sub: &Subgroup) -> (GroupTable, Vec<usize>) {
        let elems = sub.elements().to_vec();
        let mut local = vec![usize::MAX; self.n];
        for (i, &x) in elems.iter().enumerate() {
            local[x] = i;
        }
        let m = elems.len();
        let mut table = Vec::with_capacity(m * m);
        for &x in &elems {
            for &y in &elems {
                table.push(local[self.mul(x, y)] as u32);
            }
        }
        let identity = local[self.identity];
        let inverse = elems.iter().map(|&x| local[self.inv(x)]).collect();
        (
            GroupTable {
                n: m,
                table,
                identity,
                inverse,
            },
            elems,
        )
    }

    pub fn is_normal(&self, sub: &Subgroup) -> bool {
        self.normality_witness(sub).is_none()
    }

    fn normality_witness(&self, sub: &Subgroup) -> Option<(usize, usize)> {
        for &a in sub.elements() {
            for g in 0..self.n {
                if !sub.contains(self.conj(a, g)) {
                    return Some((a, g));
                }
            }
        }
        None
    }

    /// Abelian-ness of a subgroup, returning a non-commuting pair if any.
    pub fn commuting_witness(&self, sub: &Subgroup) -> Option<(usize, usize)> {
        let e = sub.elements();
        for (i, &a) in e.iter().enumerate() {
            for &b in &e[i + 1..] {
                if self.mul(a, b) != self.mul(b, a) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        let mut comms = Vec::new();
        for x in 0..self.n {
            for y in 0..self.n {
                let c = self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y));
                comms.push(c);
            }
        }
        comms.sort_unstable();
        comms.dedup();
        subgroup_generated(self, &comms)
    }
}

/// A subgroup of a parent table, stored as its sorted element list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    elements: Vec<usize>,
    parent_order: usize,
}

impl std::fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subgroup{:?}", self.elements)
    }
}

impl Subgroup {
    fn from_sorted(parent_order: usize, elements: Vec<usize>) -> Self {
        Subgroup {
            elements,
            parent_order,
        }
    }

    /// Checks closure and builds a subgroup from an arbitrary element list.
    pub fn from_elements(g: &GroupTable, elements: &[usize]) -> Result<Self> {
        let mut e = elements.to_vec();
        e.sort_unstable();
        e.dedup();
        if let Some(&x) = e.iter().find(|&&x| x >= g.order()) {
            return Err(Error::NotMember { element: x });
        }
        let sub = Subgroup::from_sorted(g.order(), e);
        if !sub.contains(g.identity()) {
            return Err(Error::NotMember {
                element: g.identity(),
            });
        }
        for &x in sub.elements() {
            if !sub.contains(g.inv(x)) {
                return Err(Error::NotMember { element: g.inv(x) });
            }
            for &y in sub.elements() {
                if !sub.contains(g.mul(x, y)) {
                    return Err(Error::NotMember {
                        element: g.mul(x, y),
                    });
                }
            }
        }
        Ok(sub)
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }
}

/// Smallest subgroup containing `seeds`, by saturating under right
/// multiplication.
pub fn subgroup_generated(g: &GroupTable, seeds: &[usize]) -> Subgroup {
    let mut seen = vec![false; g.order()];
    let mut out = vec![g.identity()];
    seen[g.identity()] = true;
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        for &s in seeds {
            let y = g.mul(x, s);
            if !seen[y] {
                seen[y] = true;
                out.push(y);
                queue.push_back(y);
            }
        }
    }
    out.sort_unstable();
    Subgroup::from_sorted(g.order(), out)
}

/// Smallest normal subgroup containing `seeds`.
pub fn normal_closure(g: &GroupTable, seeds: &[usize]) -> Subgroup {
    let mut conjugates: Vec<usize> = seeds
        .iter()
        .flat_map(|&s| (0..g.order()).map(move |x| (s, x)))
        .map(|(s, x)| g.conj(s, x))
        .collect();
    conjugates.sort_unstable();
    conjugates.dedup();
    subgroup_generated(g, &conjugates)
}

/// Product `NM` of two normal subgroups.
pub fn join(g: &GroupTable, a: &Subgroup, b: &Subgroup) -> Subgroup {
    let mut seeds = a.elements().to_vec();
    seeds.extend_from_slice(b.elements());
    seeds.sort_unstable();
    seeds.dedup();
    subgroup_generated(g, &seeds)
}

/// A homomorphism given by the image of every source element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupHom {
    images: Vec<usize>,
    target_order: usize,
}

impl GroupHom {
    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn is_bijective(&self) -> bool {
        if self.images.len() != self.target_order {
            return false;
        }
        let mut hit = vec![false; self.target_order];
        self.images.iter().all(|&y| !std::mem::replace(&mut hit[y], true))
    }

    pub fn identity(g: &GroupTable) -> Self {
        GroupHom {
            images: (0..g.order()).collect(),
            target_order: g.order(),
        }
    }

    /// Builds an unchecked map. Callers must guarantee multiplicativity.
    pub(crate) fn from_images_unchecked(images: Vec<usize>, target_order: usize) -> Self {
        GroupHom {
            images,
            target_order,
        }
    }

    pub fn kernel(&self, source: &GroupTable, target: &GroupTable) -> Subgroup {
        let e: Vec<usize> = (0..source.order())
            .filter(|&x| self.images[x] == target.identity())
            .collect();
        Subgroup::from_sorted(source.order(), e)
    }

    /// Inverse map of a bijective hom.
    pub fn inverse(&self) -> Option<GroupHom> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y] = x;
        }
        Some(GroupHom {
            images: inv,
            target_order: self.images.len(),
        })
    }

    /// `other ∘ self`: apply `self` first.
    pub fn then(&self, other: &GroupHom) -> GroupHom {
        GroupHom {
            images: self.images.iter().map(|&y| other.images[y]).collect(),
            target_order: other.target_order,
        }
    }
}

/// Verifies multiplicativity of an element-wise map `G -> G0`.
pub fn check_hom_from_images(
    g: &GroupTable,
    g0: &GroupTable,
    images: &[usize],
) -> Result<GroupHom> {
    if images.len() != g.order() {
        return Err(Error::MalformedTable(format!(
            "map has {} images for a group of order {}",
            images.len(),
            g.order()
        )));
    }
    if let Some(&y) = images.iter().find(|&&y| y >= g0.order()) {
        return Err(Error::NotMember { element: y });
    }
    for x in 0..g.order() {
        for y in 0..g.order() {
            if images[g.mul(x, y)] != g0.mul(images[x], images[y]) {
                return Err(Error::NotMultiplicative { x, y });
            }
        }
    }
    Ok(GroupHom {
        images: images.to_vec(),
        target_order: g0.order(),
    })
}

/// One letter `t_i^{±1}` of a group word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

/// A word in the free group on `t_0, ..., t_{k-1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn generator(i: usize) -> Self {
        Word {
            letters: vec![Letter {
                generator: i,
                inverse: false,
            }],
        }
    }

    /// Parses `[(gen, ±1)]` pairs.
    pub fn from_pairs(pairs: &[(usize, i8)]) -> Self {
        Word {
            letters: pairs
                .iter()
                .map(|&(g, s)| Letter {
                    generator: g,
                    inverse: s < 0,
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter {
                    generator: l.generator,
                    inverse: !l.inverse,
                })
                .collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// Largest generator index used plus one.
    pub fn arity(&self) -> usize {
        self.letters.iter().map(|l| l.generator + 1).max().unwrap_or(0)
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let mut s = String::new();
        for l in &self.letters {
            let _ = write!(s, "t{}", l.generator + 1);
            if l.inverse {
                s.push_str("^-1");
            }
        }
        f.write_str(&s)
    }
}

/// Evaluates `w(args)` in `g`; the empty word gives the identity.
pub fn evaluate_word(w: &Word, args: &[usize], g: &GroupTable) -> usize {
    assert!(args.len() >= w.arity(), "word needs {} arguments", w.arity());
    w.letters.iter().fold(g.identity(), |acc, l| {
        let x = args[l.generator];
        g.mul(acc, if l.inverse { g.inv(x) } else { x })
    })
}

/// A quotient `G/A` with its natural map and least-index coset representatives.
#[derive(Clone, Debug)]
pub struct QuotientData {
    pub group: GroupTable,
    pub natural: GroupHom,
    pub coset_reps: Vec<usize>,
}

impl QuotientData {
    /// Coset (as a quotient element) of `x`.
    pub fn coset_of(&self, x: usize) -> usize {
        self.natural.apply(x)
    }

    /// All elements of `G` in the coset `h`.
    pub fn coset_elements(&self, h: usize) -> Vec<usize> {
        (0..self.natural.images.len())
            .filter(|&x| self.natural.images[x] == h)
            .collect()
    }
}

pub fn quotient(g: &GroupTable, a: &Subgroup) -> Result<QuotientData> {
    if let Some((element, conjugator)) = g.normality_witness(a) {
        return Err(Error::NotNormal {
            element,
            conjugator,
        });
    }
    let n = g.order();
    let mut coset = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if coset[x] != usize::MAX {
            continue;
        }
        let idx = reps.len();
        reps.push(x);
        for &y in a.elements() {
            coset[g.mul(x, y)] = idx;
        }
    }
    let m = reps.len();
    let mut table = Vec::with_capacity(m * m);
    for &x in &reps {
        for &y in &reps {
            table.push(coset[g.mul(x, y)] as u32);
        }
    }
    let identity = coset[g.identity()];
    let inverse = reps.iter().map(|&x| coset[g.inv(x)]).collect();
    let group = GroupTable {
        n: m,
        table,
        identity,
        inverse,
    };
    Ok(QuotientData {
        group,
        natural: GroupHom {
            images: coset,
            target_order: m,
        },
        coset_reps: reps,
    })
}

/// Lexicographic stream of the `k`-tuples of `G` whose cosets generate `G/A`.
pub struct QuotientGeneratingTuples {
    quotient: QuotientData,
    n: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for QuotientGeneratingTuples {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        loop {
            let tuple = self.current.clone()?;
            // advance odometer
            let mut next = tuple.clone();
            let mut i = next.len();
            loop {
                if i == 0 {
                    self.current = None;
                    break;
                }
                i -= 1;
                next[i] += 1;
                if next[i] < self.n {
                    self.current = Some(next);
                    break;
                }
                next[i] = 0;
            }
            let images: Vec<usize> = tuple.iter().map(|&x| self.quotient.coset_of(x)).collect();
            if subgroup_generated(&self.quotient.group, &images).order() == self.quotient.group.order() {
                return Some(tuple);
            }
        }
    }
}

pub fn enumerate_quotient_generating_tuples(
    g: &GroupTable,
    a: &Subgroup,
    k: usize,
) -> Result<QuotientGeneratingTuples> {
    let quotient = quotient(g, a)?;
    Ok(QuotientGeneratingTuples {
        quotient,
        n: g.order(),
        current: Some(vec![0; k]),
    })
}

/// Parses the `.gtab` format: `n`, then `n` rows of 1-based entries.
pub fn parse_gtab(text: &str) -> Result<GroupTable> {
    let mut tokens = text.split_whitespace();
    let n: usize = tokens
        .next()
        .ok_or_else(|| Error::Parse("missing order".into()))?
        .parse()
        .map_err(|e| Error::Parse(format!("order: {e}")))?;
    if n == 0 {
        return Err(Error::Parse("order must be positive".into()));
    }
    let mut raw = vec![vec![0; n]; n];
    for (i, row) in raw.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let tok = tokens
                .next()
                .ok_or_else(|| Error::Parse(format!("missing entry at row {}, column {}", i + 1, j + 1)))?;
            let v: usize = tok
                .parse()
                .map_err(|e| Error::Parse(format!("entry {tok:?}: {e}")))?;
            if v == 0 || v > n {
                return Err(Error::Parse(format!(
                    "entry {v} at row {}, column {} outside 1..={n}",
                    i + 1,
                    j + 1
                )));
            }
            *cell = v - 1;
        }
    }
    if tokens.next().is_some() {
        return Err(Error::Parse("trailing data after table".into()));
    }
    validate_table(&raw)
}

pub fn to_gtab(g: &GroupTable) -> String {
    let mut s = format!("{}\n", g.order());
    for i in 0..g.order() {
        let row: Vec<String> = (0..g.order()).map(|j| (g.mul(i, j) + 1).to_string()).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

/// Parses a whitespace-separated list of 1-based element indices.
pub fn parse_element_list(text: &str, n: usize) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|tok| {
            let v: usize = tok
                .parse()
                .map_err(|e| Error::Parse(format!("element {tok:?}: {e}")))?;
            if v == 0 || v > n {
                return Err(Error::Parse(format!("element {v} outside 1..={n}")));
            }
            Ok(v - 1)
        })
        .collect()
}
