//! Abelian normal subgroups at the bottom of short cyclic/simple towers, and
//! the isomorphism test built on them.
//!
//! If `G = N_0 > N_1 > ... > N_k = A` with each `N_{i+1}` normal in `N_i`,
//! every factor cyclic or simple and `A` abelian and normal in `G`, then
//! `G/A` is `2k`-generated. Every isomorphism `G -> G0` sends `A` to such
//! a subgroup `A0` of `G0` and induces some `psi: G/A -> G0/A0`, so the set
//! of isomorphisms is a union of cosets of `Aut_0(G, A)`.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abelian::{all_homs_to_cyclic, decompose};
use crate::cayley::{
    check_hom_from_images, enumerate_quotient_generating_tuples, evaluate_word, join, normal_closure, quotient,
    GroupHom, GroupTable, QuotientData, Subgroup,
};
use crate::error::{Error, Result};
use crate::extiso::{quotient_presentation, ExtensionContext, ExtensionTarget, IsomorphismCoset};
use crate::permgrp::{Perm, StabChainGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorKind {
    Cyclic,
    Simple,
}

/// `A = N_k` together with the tower `N_0 = G, ..., N_k` it sits in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalWitness {
    pub subgroup: Subgroup,
    pub tower: Vec<Subgroup>,
    /// kind of `N_i / N_{i+1}`
    pub factor_kinds: Vec<FactorKind>,
}

impl NormalWitness {
    /// Rechecks every level: normality, factor kind, and that the bottom is
    /// abelian and normal in `G`.
    pub fn verify(&self, g: &GroupTable) -> bool {
        let Some(top) = self.tower.first() else {
            return false;
        };
        if top.order() != g.order() || self.tower.last() != Some(&self.subgroup) {
            return false;
        }
        if self.factor_kinds.len() + 1 != self.tower.len() {
            return false;
        }
        for (i, kind) in self.factor_kinds.iter().enumerate() {
            let (upper, lower) = (&self.tower[i], &self.tower[i + 1]);
            if !lower.is_subset_of(upper) {
                return false;
            }
            let (h, map) = g.induced(upper);
            let Some(local) = localize(&map, lower.elements()) else {
                return false;
            };
            let Ok(sub) = Subgroup::from_elements(&h, &local) else {
                return false;
            };
            let Ok(q) = quotient(&h, &sub) else {
                return false;
            };
            let ok = match kind {
                FactorKind::Cyclic => is_cyclic(&q.group),
                FactorKind::Simple => is_simple(&q.group),
            };
            if !ok {
                return false;
            }
        }
        g.is_normal(&self.subgroup) && g.commuting_witness(&self.subgroup).is_none()
    }
}

fn localize(map: &[usize], elems: &[usize]) -> Option<Vec<usize>> {
    elems.iter().map(|x| map.iter().position(|y| y == x)).collect()
}

fn is_cyclic(g: &GroupTable) -> bool {
    (0..g.order()).any(|x| g.element_order(x) == g.order())
}

fn is_simple(g: &GroupTable) -> bool {
    g.order() > 1 && normal_subgroups(g).len() == 2
}

/// The lattice of normal subgroups, smallest first, as the join-closure of
/// the normal closures of single elements.
pub fn normal_subgroups(g: &GroupTable) -> Vec<Subgroup> {
    let mut set: BTreeSet<Subgroup> = (0..g.order()).map(|x| normal_closure(g, &[x])).collect();
    let minimal: Vec<Subgroup> = set.iter().cloned().collect();
    loop {
        let current: Vec<Subgroup> = set.iter().cloned().collect();
        let mut grew = false;
        for a in &current {
            for b in &minimal {
                if !b.is_subset_of(a) && set.insert(join(g, a, b)) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let mut out: Vec<Subgroup> = set.into_iter().collect();
    out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.cmp(b)));
    out
}

/// Normal `A` with `G/A` cyclic, as kernels of maps `G/[G,G] -> Z_e`.
pub fn cyclic_quotient_normals(g: &GroupTable) -> Vec<Subgroup> {
    let derived = g.derived_subgroup();
    let ab = quotient(g, &derived).expect("derived subgroup is normal");
    let dec = decompose(&ab.group, &ab.group.whole()).expect("abelianization is abelian");
    let e = ab.group.exponent() as u64;
    let coords: Vec<Vec<u64>> = (0..ab.group.order())
        .map(|x| dec.express(x).expect("in the group"))
        .collect();
    let mut seen = BTreeSet::new();
    for hom in all_homs_to_cyclic(&dec, e) {
        let kernel: Vec<usize> = (0..g.order())
            .filter(|&x| {
                let v = &coords[ab.coset_of(x)];
                v.iter().zip(&hom).fold(0u64, |acc, (&c, &h)| (acc + c * h) % e) == 0
            })
            .collect();
        seen.insert(Subgroup::from_elements(g, &kernel).expect("kernel is a subgroup"));
    }
    sorted(seen)
}

/// Normal `A` with `G/A` simple: the normal subgroups with exactly one
/// normal subgroup strictly above them.
pub fn simple_quotient_normals(g: &GroupTable) -> Vec<Subgroup> {
    let lattice = normal_subgroups(g);
    lattice
        .iter()
        .filter(|n| {
            n.order() < g.order() && lattice.iter().filter(|m| n.is_subset_of(m)).count() == 2
        })
        .cloned()
        .collect()
}

fn sorted(set: BTreeSet<Subgroup>) -> Vec<Subgroup> {
    let mut v: Vec<Subgroup> = set.into_iter().collect();
    v.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.cmp(b)));
    v
}

/// One level down: subgroups of `n` normal in it with cyclic or simple
/// quotient, expressed in `g`.
fn children(g: &GroupTable, n: &Subgroup) -> Vec<(Subgroup, FactorKind)> {
    let (h, map) = g.induced(n);
    let lift = |s: &Subgroup| {
        let elems: Vec<usize> = s.elements().iter().map(|&x| map[x]).collect();
        let mut elems = elems;
        elems.sort_unstable();
        Subgroup::from_elements(g, &elems).expect("image of a subgroup")
    };
    let mut out: Vec<(Subgroup, FactorKind)> = Vec::new();
    let mut seen = BTreeSet::new();
    for s in cyclic_quotient_normals(&h) {
        let s = lift(&s);
        if seen.insert(s.clone()) {
            out.push((s, FactorKind::Cyclic));
        }
    }
    for s in simple_quotient_normals(&h) {
        let s = lift(&s);
        if seen.insert(s.clone()) {
            out.push((s, FactorKind::Simple));
        }
    }
    out
}

/// Abelian normal subgroups of `G` at the bottom of a length-`k` tower with
/// cyclic or simple factors, one witness per subgroup, smallest first.
pub fn tower_normals(g: &GroupTable, k: usize) -> Vec<NormalWitness> {
    let top = g.whole();
    let mut level = vec![NormalWitness {
        subgroup: top.clone(),
        tower: vec![top],
        factor_kinds: Vec::new(),
    }];
    for _ in 0..k {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for w in &level {
            for (s, kind) in children(g, &w.subgroup) {
                if seen.insert(s.clone()) {
                    let mut tower = w.tower.clone();
                    tower.push(s.clone());
                    let mut kinds = w.factor_kinds.clone();
                    kinds.push(kind);
                    next.push(NormalWitness {
                        subgroup: s,
                        tower,
                        factor_kinds: kinds,
                    });
                }
            }
        }
        level = next;
    }
    let mut out: Vec<NormalWitness> = level
        .into_iter()
        .filter(|w| g.is_normal(&w.subgroup) && g.commuting_witness(&w.subgroup).is_none())
        .collect();
    out.sort_by(|a, b| {
        a.subgroup
            .order()
            .cmp(&b.subgroup.order())
            .then_with(|| a.subgroup.cmp(&b.subgroup))
    });
    debug_assert!(out.iter().all(|w| w.verify(g)));
    out
}

/// Options for [`isomorphism_test_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TowerOptions {
    /// Enumerate quotient maps on a minimum-size generating tuple instead of
    /// a `2k`-tuple.
    pub min_generators: bool,
    /// Cap on intertwiner enumeration.
    pub cap: u64,
}

impl Default for TowerOptions {
    fn default() -> Self {
        TowerOptions {
            min_generators: false,
            cap: crate::modiso::DEFAULT_CAP,
        }
    }
}

#[derive(Clone, Debug)]
pub enum IsomorphismOutcome {
    Isomorphic(IsomorphismCoset),
    NotIsomorphic,
}

impl IsomorphismOutcome {
    pub fn coset(&self) -> Option<&IsomorphismCoset> {
        match self {
            IsomorphismOutcome::Isomorphic(c) => Some(c),
            IsomorphismOutcome::NotIsomorphic => None,
        }
    }
}

/// Smallest `m` such that `G/A` is generated by the cosets of an `m`-tuple,
/// with the lexicographically first such tuple.
fn min_generating_tuple(g: &GroupTable, a: &Subgroup) -> Result<Vec<usize>> {
    for m in 0..=g.order() {
        if let Some(t) = enumerate_quotient_generating_tuples(g, a, m)?.next() {
            return Ok(t);
        }
    }
    Err(Error::NotGenerating)
}

/// All isomorphisms `q -> q0`, determined by images of a generating tuple.
pub fn quotient_isomorphisms(q: &GroupTable, q0: &GroupTable, gens: &[usize]) -> Result<Vec<GroupHom>> {
    if q.order() != q0.order() {
        return Ok(Vec::new());
    }
    let qd = quotient(q, &q.trivial())?;
    let p = quotient_presentation(&qd, gens)?;
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&x| (0..q0.order()).filter(|&y| q0.element_order(y) == q.element_order(x)).collect())
        .collect();
    let total: usize = candidates.iter().map(Vec::len).product();
    let homs: Vec<Option<GroupHom>> = (0..total)
        .into_par_iter()
        .map(|mut idx| {
            let mut imgs = Vec::with_capacity(gens.len());
            for c in candidates.iter().rev() {
                imgs.push(c[idx % c.len()]);
                idx /= c.len();
            }
            imgs.reverse();
            if p.relators.iter().any(|w| evaluate_word(w, &imgs, q0) != q0.identity()) {
                return None;
            }
            let images: Vec<usize> = p.word_for.iter().map(|w| evaluate_word(w, &imgs, q0)).collect();
            let images: Vec<usize> = (0..q.order()).map(|h| images[qd.coset_of(h)]).collect();
            check_hom_from_images(q, q0, &images).ok().filter(GroupHom::is_bijective)
        })
        .collect();
    Ok(homs.into_iter().flatten().collect())
}

/// Everything on the `G` side: the chosen bottom group and the engine.
struct Source {
    ctx: ExtensionContext,
    quotient: QuotientData,
    psi_gens: Vec<usize>,
}

impl Source {
    fn new(g: &GroupTable, k: usize, opts: &TowerOptions) -> Result<Self> {
        let witnesses = tower_normals(g, k);
        let chosen = witnesses
            .iter()
            .max_by(|a, b| a.subgroup.order().cmp(&b.subgroup.order()).then_with(|| b.subgroup.cmp(&a.subgroup)))
            .ok_or(Error::UnsupportedShape { depth: k })?;
        let a = chosen.subgroup.clone();
        let gens = min_generating_tuple(g, &a)?;
        let mut ctx = ExtensionContext::new(g, &a, &gens)?;
        ctx.cap = opts.cap;
        let quotient = ctx.source.quotient.clone();
        let trivial = quotient.group.trivial();
        let psi_gens = if opts.min_generators {
            min_generating_tuple(&quotient.group, &trivial)?
        } else {
            enumerate_quotient_generating_tuples(&quotient.group, &trivial, 2 * k)?
                .next()
                .ok_or(Error::NotGenerating)?
        };
        Ok(Source {
            ctx,
            quotient,
            psi_gens,
        })
    }

    /// Targets `(G0, A0)` with `A0` a witness of the same shape as `A`.
    fn targets(&self, g0: &GroupTable, k: usize) -> Result<Vec<ExtensionTarget>> {
        let inv = self.ctx.source.decomposition.invariant_factors();
        tower_normals(g0, k)
            .into_iter()
            .filter(|w| w.subgroup.order() == self.ctx.source.bottom.order())
            .map(|w| ExtensionTarget::new(g0, &w.subgroup))
            .filter(|t| t.as_ref().map_or(true, |t| t.decomposition.invariant_factors() == inv))
            .collect()
    }

    /// One isomorphism per `(A0, psi)` that extends, in order.
    fn representatives(&self, g0: &GroupTable, k: usize, first_only: bool) -> Result<Vec<GroupHom>> {
        let mut out = Vec::new();
        if g0.order() != self.ctx.source.group.order() {
            return Ok(out);
        }
        for t in self.targets(g0, k)? {
            let psis = quotient_isomorphisms(&self.quotient.group, &t.quotient.group, &self.psi_gens)?;
            let found: Vec<Option<GroupHom>> = if first_only {
                let hit = psis
                    .par_iter()
                    .map(|psi| self.ctx.extend(&t, psi))
                    .find_map_first(|r| match r {
                        Ok(None) => None,
                        other => Some(other),
                    })
                    .transpose()?
                    .flatten();
                vec![hit]
            } else {
                psis.par_iter().map(|psi| self.ctx.extend(&t, psi)).collect::<Result<_>>()?
            };
            out.extend(found.into_iter().flatten());
            if first_only && !out.is_empty() {
                break;
            }
        }
        Ok(out)
    }

    fn automorphisms(&self, k: usize) -> Result<StabChainGroup> {
        let g = &self.ctx.source.group;
        let aut0 = self.ctx.aut0()?;
        let mut gens = aut0.strong_generators();
        let mut group = aut0;
        for phi in self.representatives(g, k, false)? {
            let p = Perm::from_images(phi.images())?;
            if !group.contains(&p) {
                gens.push(p);
                group = StabChainGroup::build(g.order(), &gens)?;
            }
        }
        Ok(group)
    }
}

/// `Aut(G)` as a permutation group on the elements of `G`.
pub fn automorphism_group(g: &GroupTable, k: usize) -> Result<StabChainGroup> {
    automorphism_group_with(g, k, &TowerOptions::default())
}

pub fn automorphism_group_with(g: &GroupTable, k: usize, opts: &TowerOptions) -> Result<StabChainGroup> {
    Source::new(g, k, opts)?.automorphisms(k)
}

/// All isomorphisms `G -> G0` as `Aut(G)` followed by one representative.
pub fn isomorphism_test(g: &GroupTable, g0: &GroupTable, k: usize) -> Result<IsomorphismOutcome> {
    isomorphism_test_with(g, g0, k, &TowerOptions::default())
}

pub fn isomorphism_test_with(
    g: &GroupTable,
    g0: &GroupTable,
    k: usize,
    opts: &TowerOptions,
) -> Result<IsomorphismOutcome> {
    let src = Source::new(g, k, opts)?;
    let Some(rep) = src.representatives(g0, k, true)?.into_iter().next() else {
        return Ok(IsomorphismOutcome::NotIsomorphic);
    };
    Ok(IsomorphismOutcome::Isomorphic(IsomorphismCoset {
        stabilizer: src.automorphisms(k)?,
        representative: Some(rep),
    }))
}

/// The least `k <= max_k` with a witness in `G`.
pub fn least_depth(g: &GroupTable, max_k: usize) -> Option<usize> {
    (0..=max_k).find(|&k| !tower_normals(g, k).is_empty())
}

/// Largest abelian normal subgroup `A` with `G/A` generated by `k` cosets.
pub fn default_bottom(g: &GroupTable, k: usize) -> Result<Subgroup> {
    for a in normal_subgroups(g).into_iter().rev() {
        if g.commuting_witness(&a).is_none() && enumerate_quotient_generating_tuples(g, &a, k)?.next().is_some() {
            return Ok(a);
        }
    }
    Err(Error::UnsupportedShape { depth: k })
}

/// Isomorphisms `G -> G0` carrying `A` onto `A0`, or onto any abelian
/// normal subgroup of `G0` of the same shape when `a0` is `None`. The result
/// is the `Aut_0(G, A)`-coset of the first isomorphism found.
pub fn extension_isomorphism(
    g: &GroupTable,
    g0: &GroupTable,
    a: &Subgroup,
    a0: Option<&Subgroup>,
    opts: &TowerOptions,
) -> Result<IsomorphismCoset> {
    let gens = min_generating_tuple(g, a)?;
    let mut ctx = ExtensionContext::new(g, a, &gens)?;
    ctx.cap = opts.cap;
    let stabilizer = ctx.aut0()?;
    let mut representative = None;
    if g.order() == g0.order() {
        let inv = ctx.source.decomposition.invariant_factors().to_vec();
        let bottoms: Vec<Subgroup> = match a0 {
            Some(a0) => vec![a0.clone()],
            None => normal_subgroups(g0)
                .into_iter()
                .filter(|b| b.order() == a.order() && g0.commuting_witness(b).is_none())
                .collect(),
        };
        let q = &ctx.source.quotient.group;
        let psi_gens = min_generating_tuple(q, &q.trivial())?;
        for b in bottoms {
            let t = ExtensionTarget::new(g0, &b)?;
            if t.decomposition.invariant_factors() != inv.as_slice() {
                continue;
            }
            for psi in quotient_isomorphisms(q, &t.quotient.group, &psi_gens)? {
                representative = ctx.extend(&t, &psi)?;
                if representative.is_some() {
                    break;
                }
            }
            if representative.is_some() {
                break;
            }
        }
    }
    Ok(IsomorphismCoset {
        stabilizer,
        representative,
    })
}
