//! Permutation groups via stabilizer chains.
//!
//! Permutations act on the right: `p.then(q)` applies `p` first. The chain is
//! built by deterministic Schreier–Sims with explicit transversals, which is
//! adequate for degrees up to a few thousand.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm {
    images: Vec<u32>,
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "()");
        }
        let mut seen = vec![false; self.degree()];
        for start in 0..self.degree() {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            write!(f, "(")?;
            let mut p = start;
            let mut first = true;
            while !seen[p] {
                seen[p] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{p}")?;
                first = false;
                p = self.apply(p);
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in images {
            if x >= n || seen[x] {
                return Err(Error::Parse(format!("not a permutation of 0..{n}")));
            }
            seen[x] = true;
        }
        Ok(Perm {
            images: images.iter().map(|&x| x as u32).collect(),
        })
    }

    /// Product of disjoint or overlapping cycles, applied left to right.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Self {
        cycles.iter().fold(Perm::identity(degree), |acc, cyc| {
            let mut images: Vec<usize> = (0..degree).collect();
            for (i, &p) in cyc.iter().enumerate() {
                images[p] = cyc[(i + 1) % cyc.len()];
            }
            acc.then(&Perm::from_images(&images).expect("cycle is a permutation"))
        })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, p: usize) -> usize {
        self.images[p] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    pub fn then(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: self.images.iter().map(|&x| other.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn first_moved(&self) -> Option<usize> {
        self.images.iter().enumerate().position(|(i, &x)| i as u32 != x)
    }

    pub fn pow(&self, e: u64) -> Perm {
        let mut result = Perm::identity(self.degree());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        result
    }
}

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    /// generators of the stabilizer of the earlier base points
    gens: Vec<Perm>,
    /// `transversal[p]` maps `base` to `p`
    transversal: Vec<Option<Perm>>,
    orbit: Vec<usize>,
}

impl Level {
    fn new(base: usize, degree: usize) -> Self {
        let mut transversal = vec![None; degree];
        transversal[base] = Some(Perm::identity(degree));
        Level {
            base,
            gens: Vec::new(),
            transversal,
            orbit: vec![base],
        }
    }

    fn extend_orbit(&mut self) {
        let mut queue: VecDeque<usize> = self.orbit.iter().copied().collect();
        while let Some(p) = queue.pop_front() {
            for s in &self.gens {
                let q = s.apply(p);
                if self.transversal[q].is_none() {
                    let u = self.transversal[p].as_ref().expect("orbit point").then(s);
                    self.transversal[q] = Some(u);
                    self.orbit.push(q);
                    queue.push_back(q);
                }
            }
        }
    }
}

/// A permutation group with a base and strong generating set.
#[derive(Clone, Debug)]
pub struct StabChainGroup {
    degree: usize,
    generators: Vec<Perm>,
    levels: Vec<Level>,
}

impl StabChainGroup {
    pub fn build(degree: usize, generators: &[Perm]) -> Result<Self> {
        Self::build_with_base(degree, generators, &[])
    }

    /// Chain whose base starts with `prefix` (duplicates ignored).
    pub fn build_with_base(degree: usize, generators: &[Perm], prefix: &[usize]) -> Result<Self> {
        for g in generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let mut base: Vec<usize> = Vec::new();
        for &p in prefix {
            assert!(p < degree, "base point out of range");
            if !base.contains(&p) {
                base.push(p);
            }
        }
        let gens: Vec<Perm> = generators.iter().filter(|g| !g.is_identity()).cloned().collect();
        for g in &gens {
            if base.iter().all(|&b| g.apply(b) == b) {
                base.push(g.first_moved().expect("non-identity"));
            }
        }
        let mut levels: Vec<Level> = base.iter().map(|&b| Level::new(b, degree)).collect();
        for g in &gens {
            for (i, level) in levels.iter_mut().enumerate() {
                level.gens.push(g.clone());
                if g.apply(base[i]) != base[i] {
                    break;
                }
            }
        }
        for level in &mut levels {
            level.extend_orbit();
        }
        let mut group = StabChainGroup {
            degree,
            generators: generators.to_vec(),
            levels,
        };
        group.schreier_sims();
        Ok(group)
    }

    fn schreier_sims(&mut self) {
        let mut i = self.levels.len();
        while i > 0 {
            let lvl = i - 1;
            let mut restart = None;
            'scan: for oi in 0..self.levels[lvl].orbit.len() {
                let p = self.levels[lvl].orbit[oi];
                for si in 0..self.levels[lvl].gens.len() {
                    let level = &self.levels[lvl];
                    let s = &level.gens[si];
                    let up = level.transversal[p].as_ref().expect("orbit point");
                    let q = s.apply(p);
                    let uq = level.transversal[q].as_ref().expect("orbit closed");
                    let schreier = up.then(s).then(&uq.inverse());
                    let (h, j) = self.strip(schreier, lvl + 1);
                    if j < self.levels.len() || !h.is_identity() {
                        if j == self.levels.len() {
                            let b = h.first_moved().expect("non-identity residue");
                            self.levels.push(Level::new(b, self.degree));
                        }
                        for l in lvl + 1..=j {
                            self.levels[l].gens.push(h.clone());
                            self.levels[l].extend_orbit();
                        }
                        restart = Some(j + 1);
                        break 'scan;
                    }
                }
            }
            match restart {
                Some(next) => i = next,
                None => i -= 1,
            }
        }
    }

    /// Sifts `g` from level `start`; returns the residue and the level at
    /// which sifting stopped (`levels.len()` when it passed every level).
    fn strip(&self, mut g: Perm, start: usize) -> (Perm, usize) {
        for j in start..self.levels.len() {
            let level = &self.levels[j];
            let p = g.apply(level.base);
            match &level.transversal[p] {
                None => return (g, j),
                Some(u) => g = g.then(&u.inverse()),
            }
        }
        let n = self.levels.len();
        (g, n)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn strong_generators(&self) -> Vec<Perm> {
        let mut out: Vec<Perm> = Vec::new();
        for level in &self.levels {
            for g in &level.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (h, j) = self.strip(g.clone(), 0);
        j == self.levels.len() && h.is_identity()
    }

    /// Every element, in a fixed order; intended for small groups.
    pub fn elements(&self) -> Vec<Perm> {
        let mut out = vec![Perm::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * level.orbit.len());
            for h in &out {
                for &p in &level.orbit {
                    next.push(h.then(level.transversal[p].as_ref().expect("orbit point")));
                }
            }
            out = next;
        }
        out
    }

    pub fn orbit_with_transversal(&self, p: usize) -> BTreeMap<usize, Perm> {
        let mut map = BTreeMap::from([(p, Perm::identity(self.degree))]);
        let mut queue = VecDeque::from([p]);
        let gens = self.strong_generators();
        while let Some(x) = queue.pop_front() {
            for s in &gens {
                let y = s.apply(x);
                if !map.contains_key(&y) {
                    let u = map[&x].then(s);
                    map.insert(y, u);
                    queue.push_back(y);
                }
            }
        }
        map
    }

    pub fn pointwise_stabilizer(&self, pts: &[usize]) -> StabChainGroup {
        let rebased = self.rebase(pts);
        let depth = distinct(pts).len();
        let gens: Vec<Perm> = rebased
            .levels
            .get(depth)
            .map(|l| l.gens.clone())
            .unwrap_or_default();
        let levels: Vec<Level> = rebased.levels.into_iter().skip(depth).collect();
        StabChainGroup {
            degree: self.degree,
            generators: gens,
            levels,
        }
    }

    /// Some `g` with `src[i]^g = dst[i]` for every `i`, if one exists.
    pub fn transporter(&self, src: &[usize], dst: &[usize]) -> Option<Perm> {
        assert_eq!(src.len(), dst.len(), "tuple lengths");
        // repeated source points must have repeated targets
        for i in 0..src.len() {
            for j in 0..i {
                if (src[i] == src[j]) != (dst[i] == dst[j]) {
                    return None;
                }
            }
        }
        let base = distinct(src);
        let rebased = self.rebase(&base);
        let mut targets: Vec<usize> = base
            .iter()
            .map(|&b| dst[src.iter().position(|&s| s == b).expect("source point")])
            .collect();
        let mut result = Perm::identity(self.degree);
        for (i, level) in rebased.levels.iter().take(base.len()).enumerate() {
            let u = level.transversal[targets[i]].as_ref()?;
            let u_inv = u.inverse();
            for t in targets.iter_mut() {
                *t = u_inv.apply(*t);
            }
            result = u.then(&result);
        }
        debug_assert!(src.iter().zip(dst).all(|(&s, &d)| result.apply(s) == d));
        Some(result)
    }

    fn rebase(&self, prefix: &[usize]) -> StabChainGroup {
        StabChainGroup::build_with_base(self.degree, &self.strong_generators(), prefix)
            .expect("degrees already checked")
    }
}

fn distinct(pts: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for &p in pts {
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// A sub-list generating the same group: keeps a generator only when it is
/// not already in the group generated by the ones kept so far.
pub fn reduce_generators(degree: usize, gens: &[Perm]) -> Vec<Perm> {
    let mut kept: Vec<Perm> = Vec::new();
    let mut group = StabChainGroup::build(degree, &[]).expect("empty generating set");
    for g in gens {
        if !group.contains(g) {
            kept.push(g.clone());
            group = StabChainGroup::build(degree, &kept).expect("uniform degree");
        }
    }
    kept
}
