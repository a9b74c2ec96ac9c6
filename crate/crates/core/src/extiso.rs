//! Isomorphisms between extensions `A -> G -> H` of abelian groups.
//!
//! With generators `g_1, ..., g_k` of `G` modulo `A` fixed, an isomorphism
//! `G -> G0` sending each `g_i` to a prescribed `g0_i` and `A` onto `A0` is
//! determined by its restriction `phi: A -> A0`, which must intertwine the
//! conjugation actions and carry the relator values `u_j = w_j(g)` to
//! `u0_j = w_j(g0)`. We find `phi` as `mu` composed after a unit `theta` of
//! the commutant `K`, where `mu` is any intertwiner and `theta` moves the
//! `u_j` onto `mu^-1(u0_j)`.

use std::collections::{BTreeMap, VecDeque};

use rayon::prelude::*;

use crate::abelian::{decompose, AbelianDecomposition};
use crate::cayley::{
    check_hom_from_images, enumerate_quotient_generating_tuples, evaluate_word, quotient, GroupHom, GroupTable,
    QuotientData, Subgroup, Word,
};
use crate::error::{Error, Result};
use crate::finring::{commutant_ring, unit_group, ActionRing, EndoMatrix, StructuredRing, UnitGroup};
use crate::modiso::{intertwines, intertwining_isomorphism, DEFAULT_CAP};
use crate::permgrp::{Perm, StabChainGroup};

/// `H = <x_1, ..., x_k | w_1, ..., w_m>` read off the Cayley table of `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub k: usize,
    pub relators: Vec<Word>,
    /// `word_for[h]` evaluates to `h`; `word_for[x_i]` is `x_i` itself
    /// unless `x_i` repeats an earlier generator or is the identity
    pub word_for: Vec<Word>,
}

/// Presentation of `q.group` on the given generating elements, with one
/// relator `v_a v_b v_ab^-1` per ordered pair, plus `x_i v_{x_i}^-1` for each
/// generator whose word is not the generator itself.
pub fn quotient_presentation(q: &QuotientData, gens: &[usize]) -> Result<Presentation> {
    let h = &q.group;
    let order = h.order();
    let mut word_for: Vec<Option<Word>> = vec![None; order];
    let mut queue = VecDeque::new();
    word_for[h.identity()] = Some(Word::empty());
    queue.push_back(h.identity());
    for (i, &x) in gens.iter().enumerate() {
        if word_for[x].is_none() {
            word_for[x] = Some(Word::generator(i));
            queue.push_back(x);
        }
    }
    while let Some(y) = queue.pop_front() {
        for (i, &x) in gens.iter().enumerate() {
            let z = h.mul(y, x);
            if word_for[z].is_none() {
                word_for[z] = Some(word_for[y].as_ref().expect("visited").concat(&Word::generator(i)));
                queue.push_back(z);
            }
        }
    }
    let word_for: Vec<Word> = word_for.into_iter().collect::<Option<_>>().ok_or(Error::NotGenerating)?;
    let mut relators = Vec::with_capacity(order * order);
    for a in 0..order {
        for b in 0..order {
            relators.push(word_for[a].concat(&word_for[b]).concat(&word_for[h.mul(a, b)].inverse()));
        }
    }
    for (i, &x) in gens.iter().enumerate() {
        if word_for[x] != Word::generator(i) {
            relators.push(Word::generator(i).concat(&word_for[x].inverse()));
        }
    }
    Ok(Presentation {
        k: gens.len(),
        relators,
        word_for,
    })
}

/// `u_j = w_j(gs)`, each checked to lie in `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelatorValues {
    pub values: Vec<usize>,
}

pub fn relator_values(p: &Presentation, gs: &[usize], g: &GroupTable, a: &Subgroup) -> Result<RelatorValues> {
    let values = p
        .relators
        .iter()
        .enumerate()
        .map(|(index, w)| {
            let u = evaluate_word(w, gs, g);
            if a.contains(u) {
                Ok(u)
            } else {
                Err(Error::RelatorOutsideKernel { index })
            }
        })
        .collect::<Result<Vec<usize>>>()?;
    Ok(RelatorValues { values })
}

/// Matrix of `x -> x^c = c^-1 x c` on `A` in the coordinates of `dec`.
pub fn conjugation_matrix(g: &GroupTable, dec: &AbelianDecomposition, c: usize) -> EndoMatrix {
    let cols: Vec<Vec<u64>> = dec
        .cyclic_generators()
        .iter()
        .map(|&e| dec.express(g.conj(e, c)).expect("A is normal"))
        .collect();
    EndoMatrix::from_columns(dec.invariant_factors(), &cols)
}

/// `A` as a module over `Z_n[H]`, `n = |G|`, with `h` acting by conjugation
/// by `sections[h]`.
pub fn group_ring_module(
    g: &GroupTable,
    dec: &AbelianDecomposition,
    q: &QuotientData,
    sections: &[usize],
) -> Result<ActionRing> {
    let ring = StructuredRing::group_ring(g.order() as u64, &q.group);
    let actions = sections.iter().map(|&s| conjugation_matrix(g, dec, s)).collect();
    ActionRing::from_matrices(ring, dec.invariant_factors().to_vec(), actions)
}

/// A group with an abelian normal subgroup, prepared as the target of an
/// isomorphism search.
#[derive(Clone, Debug)]
pub struct ExtensionTarget {
    pub group: GroupTable,
    pub bottom: Subgroup,
    pub decomposition: AbelianDecomposition,
    pub quotient: QuotientData,
}

impl ExtensionTarget {
    pub fn new(g: &GroupTable, a: &Subgroup) -> Result<Self> {
        let quotient = quotient(g, a)?;
        let decomposition = decompose(g, a)?;
        Ok(ExtensionTarget {
            group: g.clone(),
            bottom: a.clone(),
            decomposition,
            quotient,
        })
    }
}

/// The source side `(G, A, g_1, ..., g_k)` with everything that does not
/// depend on the target: presentation, relator values, and `K^x` acting on
/// the points of `A`.
#[derive(Clone, Debug)]
pub struct ExtensionContext {
    pub source: ExtensionTarget,
    pub gens: Vec<usize>,
    pub presentation: Presentation,
    pub relator_values: RelatorValues,
    /// `v_h(g)` for each quotient element `h`
    pub sections: Vec<usize>,
    conj: Vec<EndoMatrix>,
    units: UnitGroup,
    /// cap for the intertwiner search
    pub cap: u64,
}

impl ExtensionContext {
    pub fn new(g: &GroupTable, a: &Subgroup, gens: &[usize]) -> Result<Self> {
        let source = ExtensionTarget::new(g, a)?;
        let qgens: Vec<usize> = gens.iter().map(|&x| source.quotient.coset_of(x)).collect();
        let presentation = quotient_presentation(&source.quotient, &qgens)?;
        let relator_values = relator_values(&presentation, gens, g, a)?;
        let sections = presentation.word_for.iter().map(|w| evaluate_word(w, gens, g)).collect();
        let dec = &source.decomposition;
        let conj: Vec<EndoMatrix> = gens.iter().map(|&x| conjugation_matrix(g, dec, x)).collect();
        let k = commutant_ring(dec.invariant_factors(), &conj);
        let units = unit_group(k.ring(), Some(&k.action))?;
        Ok(ExtensionContext {
            source,
            gens: gens.to_vec(),
            presentation,
            relator_values,
            sections,
            conj,
            units,
            cap: DEFAULT_CAP,
        })
    }

    /// `K^x`: automorphisms of `A` commuting with conjugation by every `g_i`,
    /// as permutations of the points of `A`.
    pub fn commutant_units(&self) -> &StabChainGroup {
        &self.units.group
    }

    fn relator_points(&self) -> Vec<usize> {
        let dec = &self.source.decomposition;
        self.relator_values
            .values
            .iter()
            .map(|&u| dec.point_of(u).expect("relator values lie in A"))
            .collect()
    }

    /// The isomorphism `G -> G0` mapping `A` onto `A0` and `g_i` to `gs0[i]`,
    /// if one exists.
    pub fn with_prescribed_images(&self, t: &ExtensionTarget, gs0: &[usize]) -> Result<Option<GroupHom>> {
        let src = &self.source;
        let (g, g0) = (&src.group, &t.group);
        let (dec, dec0) = (&src.decomposition, &t.decomposition);
        if g.order() != g0.order()
            || dec.invariant_factors() != dec0.invariant_factors()
            || gs0.len() != self.gens.len()
        {
            return Ok(None);
        }
        // Step 1: x_i -> g0_i A0 must define an isomorphism H -> G0/A0
        let Ok(values0) = relator_values(&self.presentation, gs0, g0, &t.bottom) else {
            return Ok(None);
        };
        let sections0: Vec<usize> = self
            .presentation
            .word_for
            .iter()
            .map(|w| evaluate_word(w, gs0, g0))
            .collect();
        let mut seen = vec![false; t.quotient.group.order()];
        if seen.len() != sections0.len()
            || sections0
                .iter()
                .any(|&s| std::mem::replace(&mut seen[t.quotient.coset_of(s)], true))
        {
            return Ok(None);
        }
        // Step 3: an intertwiner mu with mu(x^{g_i}) = mu(x)^{g0_i}
        let pairs: Vec<(EndoMatrix, EndoMatrix)> = self
            .conj
            .iter()
            .cloned()
            .zip(gs0.iter().map(|&x| conjugation_matrix(g0, dec0, x)))
            .collect();
        let Some(mu) = intertwining_isomorphism(dec.invariant_factors(), &pairs, self.cap)? else {
            return Ok(None);
        };
        let mu_perm = mu.to_perm().expect("mu is bijective");
        let mu_inv = mu_perm.inverse();
        // Step 4: theta in K^x with theta(u_j) = mu^-1(u0_j)
        let src_pts = self.relator_points();
        let dst_pts: Vec<usize> = values0
            .values
            .iter()
            .map(|&u| mu_inv.apply(dec0.point_of(u).expect("relator values lie in A0")))
            .collect();
        let mut wanted: BTreeMap<usize, usize> = BTreeMap::new();
        for (&s, &d) in src_pts.iter().zip(&dst_pts) {
            if *wanted.entry(s).or_insert(d) != d {
                return Ok(None);
            }
        }
        let (from, to): (Vec<usize>, Vec<usize>) = wanted.into_iter().unzip();
        let Some(theta) = self.units.group.transporter(&from, &to) else {
            return Ok(None);
        };
        // Step 5: phi = mu after theta; Phi(v_h(g) x) = v_h(g0) phi(x)
        let phi = |x: usize| -> usize {
            let p = dec.point_of(x).expect("x lies in A");
            dec0.element_at(mu_perm.apply(theta.apply(p)))
        };
        let images: Vec<usize> = (0..g.order())
            .map(|x| {
                let h = src.quotient.coset_of(x);
                let s = self.sections[h];
                g0.mul(sections0[h], phi(g.mul(g.inv(s), x)))
            })
            .collect();
        let hom = check_hom_from_images(g, g0, &images)?;
        if !hom.is_bijective() {
            return Err(Error::InvalidAction("assembled extension map is not bijective".into()));
        }
        Ok(Some(hom))
    }

    /// `C_g`: automorphisms in `Aut_0(G, A)` fixing every `g_i`.
    pub fn stabilizer_with_fixed_generators(&self) -> Result<StabChainGroup> {
        let pts = self.relator_points();
        let c = self.units.group.pointwise_stabilizer(&pts);
        let lifts: Vec<Perm> = c.strong_generators().iter().map(|theta| self.lift(theta)).collect::<Result<_>>()?;
        StabChainGroup::build(self.source.group.order(), &lifts)
    }

    /// `v_h(g) x -> v_h(g) theta(x)`.
    fn lift(&self, theta: &Perm) -> Result<Perm> {
        let src = &self.source;
        let (g, dec) = (&src.group, &src.decomposition);
        let images: Vec<usize> = (0..g.order())
            .map(|x| {
                let s = self.sections[src.quotient.coset_of(x)];
                let a = g.mul(g.inv(s), x);
                let p = dec.point_of(a).expect("x lies in its coset");
                g.mul(s, dec.element_at(theta.apply(p)))
            })
            .collect();
        Perm::from_images(&images)
    }

    /// Candidate tuples `(g0_1, ..., g0_k)` with `g0_i` in the given cosets
    /// of `t`, in lexicographic order.
    fn candidates(&self, t: &ExtensionTarget, cosets: &[usize]) -> Vec<Vec<usize>> {
        let lists: Vec<Vec<usize>> = cosets.iter().map(|&h| t.quotient.coset_elements(h)).collect();
        let mut out = vec![Vec::new()];
        for list in &lists {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<usize>| {
                    list.iter().map(move |&y| {
                        let mut v = prefix.clone();
                        v.push(y);
                        v
                    })
                })
                .collect();
        }
        out
    }

    /// `Aut_0(G, A)`: the union of `C_g phi` over realizable images
    /// `g0_i in g_i A`.
    pub fn aut0(&self) -> Result<StabChainGroup> {
        let src = &self.source;
        let cosets: Vec<usize> = self.gens.iter().map(|&x| src.quotient.coset_of(x)).collect();
        let reps: Vec<Option<GroupHom>> = self
            .candidates(src, &cosets)
            .par_iter()
            .map(|gs0| self.with_prescribed_images(src, gs0))
            .collect::<Result<_>>()?;
        let c = self.stabilizer_with_fixed_generators()?;
        let mut gens = c.strong_generators();
        for r in reps.into_iter().flatten() {
            let p = Perm::from_images(r.images())?;
            if !p.is_identity() {
                gens.push(p);
            }
        }
        StabChainGroup::build(src.group.order(), &gens)
    }

    /// An isomorphism `G -> G0` mapping `A` onto `A0` and inducing `psi`
    /// on the quotients, searching the images of the `g_i` in order.
    pub fn extend(&self, t: &ExtensionTarget, psi: &GroupHom) -> Result<Option<GroupHom>> {
        let cosets: Vec<usize> = self
            .gens
            .iter()
            .map(|&x| psi.apply(self.source.quotient.coset_of(x)))
            .collect();
        self.candidates(t, &cosets)
            .par_iter()
            .map(|gs0| self.with_prescribed_images(t, gs0))
            .find_map_first(|r| match r {
                Ok(None) => None,
                other => Some(other),
            })
            .unwrap_or(Ok(None))
    }
}

/// The set `{sigma then representative : sigma in stabilizer}` of maps
/// `G -> G0`; empty without a representative.
#[derive(Clone, Debug)]
pub struct IsomorphismCoset {
    pub stabilizer: StabChainGroup,
    pub representative: Option<GroupHom>,
}

impl IsomorphismCoset {
    pub fn is_empty(&self) -> bool {
        self.representative.is_none()
    }

    pub fn size(&self) -> u128 {
        if self.is_empty() {
            0
        } else {
            self.stabilizer.order()
        }
    }

    /// Every map in the coset.
    pub fn elements(&self) -> Vec<GroupHom> {
        let Some(rep) = &self.representative else {
            return Vec::new();
        };
        self.stabilizer
            .elements()
            .iter()
            .map(|sigma| compose_perm(sigma, rep))
            .collect()
    }

    pub fn contains(&self, phi: &GroupHom) -> bool {
        let Some(rep) = &self.representative else {
            return false;
        };
        let Some(inv) = rep.inverse() else {
            return false;
        };
        if phi.images().len() != inv.images().len() {
            return false;
        }
        let sigma: Vec<usize> = phi.images().iter().map(|&y| inv.apply(y)).collect();
        Perm::from_images(&sigma).is_ok_and(|p| self.stabilizer.contains(&p))
    }
}

/// `x -> rep(sigma(x))`.
pub fn compose_perm(sigma: &Perm, rep: &GroupHom) -> GroupHom {
    GroupHom::from_images_unchecked(sigma.images().iter().map(|&y| rep.apply(y)).collect(), rep.images().len())
}

fn first_generating_tuple(g: &GroupTable, a: &Subgroup, k: usize) -> Result<Vec<usize>> {
    enumerate_quotient_generating_tuples(g, a, k)?
        .next()
        .ok_or(Error::NotGenerating)
}

pub fn isomorphism_with_prescribed_images(
    g: &GroupTable,
    g0: &GroupTable,
    a: &Subgroup,
    a0: &Subgroup,
    gs: &[usize],
    gs0: &[usize],
) -> Result<Option<GroupHom>> {
    let ctx = ExtensionContext::new(g, a, gs)?;
    let target = ExtensionTarget::new(g0, a0)?;
    ctx.with_prescribed_images(&target, gs0)
}

pub fn stabilizer_with_fixed_generators(g: &GroupTable, a: &Subgroup, gs: &[usize]) -> Result<StabChainGroup> {
    ExtensionContext::new(g, a, gs)?.stabilizer_with_fixed_generators()
}

/// `Aut_0(G, A)` using the first generating `k`-tuple of `G/A`.
pub fn aut0_generators(g: &GroupTable, a: &Subgroup, k: usize) -> Result<StabChainGroup> {
    let gs = first_generating_tuple(g, a, k)?;
    ExtensionContext::new(g, a, &gs)?.aut0()
}

/// All isomorphisms `G -> G0` mapping `A` onto `A0` and inducing `psi`.
pub fn extend_quotient_isomorphism(
    g: &GroupTable,
    g0: &GroupTable,
    a: &Subgroup,
    a0: &Subgroup,
    psi: &GroupHom,
    k: usize,
) -> Result<IsomorphismCoset> {
    let gs = first_generating_tuple(g, a, k)?;
    let ctx = ExtensionContext::new(g, a, &gs)?;
    let target = ExtensionTarget::new(g0, a0)?;
    let representative = ctx.extend(&target, psi)?;
    Ok(IsomorphismCoset {
        stabilizer: ctx.aut0()?,
        representative,
    })
}

/// Checks the module structure behind Step 3 on every element of `H`.
pub fn verify_intertwiner(ctx: &ExtensionContext, t: &ExtensionTarget, gs0: &[usize], mu: &EndoMatrix) -> Result<bool> {
    let sections0: Vec<usize> = ctx
        .presentation
        .word_for
        .iter()
        .map(|w| evaluate_word(w, gs0, &t.group))
        .collect();
    let m = group_ring_module(&ctx.source.group, &ctx.source.decomposition, &ctx.source.quotient, &ctx.sections)?;
    let m0 = group_ring_module(&t.group, &t.decomposition, &ctx.source.quotient, &sections0)?;
    let pairs: Vec<(EndoMatrix, EndoMatrix)> = m.actions().iter().cloned().zip(m0.actions().iter().cloned()).collect();
    Ok(intertwines(mu, &pairs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::subgroup_generated;
    use crate::groups;
    use crate::oracle::all_isomorphisms;
    use std::collections::BTreeSet;

    fn sub(g: &GroupTable, elems: &[usize]) -> Subgroup {
        subgroup_generated(g, elems)
    }

    /// Isomorphisms `G -> G0` with `Phi(A) = A0` inducing `psi`.
    fn brute_coset(
        g: &GroupTable,
        g0: &GroupTable,
        a: &Subgroup,
        a0: &Subgroup,
        psi: &GroupHom,
    ) -> BTreeSet<Vec<usize>> {
        let q = quotient(g, a).unwrap();
        let q0 = quotient(g0, a0).unwrap();
        all_isomorphisms(g, g0, 64)
            .unwrap()
            .into_iter()
            .filter(|f| a.elements().iter().all(|&x| a0.contains(f.apply(x))))
            .filter(|f| (0..g.order()).all(|x| q0.coset_of(f.apply(x)) == psi.apply(q.coset_of(x))))
            .map(|f| f.images().to_vec())
            .collect()
    }

    fn identity_psi(g: &GroupTable, a: &Subgroup) -> GroupHom {
        GroupHom::identity(&quotient(g, a).unwrap().group)
    }

    fn abelian_normal_subgroups(g: &GroupTable) -> Vec<Subgroup> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for x in 0..g.order() {
            for y in x..g.order() {
                let s = sub(g, &[x, y]);
                if g.is_normal(&s) && s.elements().iter().all(|&u| s.elements().iter().all(|&v| g.mul(u, v) == g.mul(v, u))) && seen.insert(s.elements().to_vec()) {
                    out.push(s);
                }
            }
        }
        out
    }

    #[test]
    fn presentation_examples() {
        let c2 = groups::cyclic(2);
        let q = quotient(&c2, &c2.trivial()).unwrap();
        let p = quotient_presentation(&q, &[1]).unwrap();
        assert_eq!(p.relators.len(), 4);
        assert!(p.relators.contains(&Word::generator(0).concat(&Word::generator(0))));

        let q = quotient(&c2, &c2.whole()).unwrap();
        let p = quotient_presentation(&q, &[]).unwrap();
        assert_eq!(p.relators, vec![Word::empty()]);

        let s3 = groups::symmetric(3);
        let q = quotient(&s3, &s3.trivial()).unwrap();
        let gens = crate::oracle::greedy_generators(&s3);
        assert_eq!(gens.len(), 2);
        let p = quotient_presentation(&q, &gens).unwrap();
        assert_eq!(p.relators.len(), 36);
        assert!(p.relators.iter().all(|w| evaluate_word(w, &gens, &s3) == s3.identity()));
        for (h, w) in p.word_for.iter().enumerate() {
            assert_eq!(evaluate_word(w, &gens, &s3), h);
        }

        let z4 = groups::cyclic(4);
        let q = quotient(&z4, &z4.trivial()).unwrap();
        assert_eq!(quotient_presentation(&q, &[2]), Err(Error::NotGenerating));
    }

    #[test]
    fn relator_value_examples() {
        let z4 = groups::cyclic(4);
        let a = sub(&z4, &[2]);
        let q = quotient(&z4, &a).unwrap();
        let p = quotient_presentation(&q, &[q.coset_of(1)]).unwrap();
        let u = relator_values(&p, &[1], &z4, &a).unwrap();
        let square = p.relators.iter().position(|w| *w == Word::generator(0).concat(&Word::generator(0))).unwrap();
        assert_eq!(u.values[square], 2);
        assert!(matches!(relator_values(&p, &[1], &z4, &z4.trivial()), Err(Error::RelatorOutsideKernel { .. })));

        // Q8 = <i, j>, i at index 1, j at index 4, -1 at index 2
        let q8 = groups::quaternion(8);
        let a = sub(&q8, &[1]);
        let q = quotient(&q8, &a).unwrap();
        let p = quotient_presentation(&q, &[q.coset_of(4)]).unwrap();
        let u = relator_values(&p, &[4], &q8, &a).unwrap();
        let square = p.relators.iter().position(|w| *w == Word::generator(0).concat(&Word::generator(0))).unwrap();
        assert_eq!(u.values[square], 2);
        assert_eq!(q8.element_order(2), 2);

        // complements give trivial values
        let d4 = groups::dihedral(4);
        let a = sub(&d4, &[1]);
        let q = quotient(&d4, &a).unwrap();
        let p = quotient_presentation(&q, &[q.coset_of(4)]).unwrap();
        let u = relator_values(&p, &[4], &d4, &a).unwrap();
        assert!(u.values.iter().all(|&x| x == d4.identity()));
    }

    #[test]
    fn dihedral_examples() {
        let d4 = groups::dihedral(4);
        let a = sub(&d4, &[1]);
        let (r, s) = (1, 4);
        let id = isomorphism_with_prescribed_images(&d4, &d4, &a, &a, &[s], &[s]).unwrap().unwrap();
        assert_eq!(id, GroupHom::identity(&d4));
        let sr = d4.mul(s, r);
        let f = isomorphism_with_prescribed_images(&d4, &d4, &a, &a, &[s], &[sr]).unwrap().unwrap();
        assert_eq!(f.apply(s), sr);
        assert!(all_isomorphisms(&d4, &d4, 16).unwrap().contains(&f));

        let c = stabilizer_with_fixed_generators(&d4, &a, &[s]).unwrap();
        assert_eq!(c.order(), 2);
        let aut0 = aut0_generators(&d4, &a, 1).unwrap();
        assert_eq!(aut0.order(), 8);
        assert_eq!(brute_coset(&d4, &d4, &a, &a, &identity_psi(&d4, &a)).len(), 8);

        let q8 = groups::quaternion(8);
        let a0 = sub(&q8, &[1]);
        for g0 in 0..8 {
            if !a0.contains(g0) {
                assert_eq!(isomorphism_with_prescribed_images(&d4, &q8, &a, &a0, &[s], &[g0]).unwrap(), None);
            }
        }
    }

    #[test]
    fn small_stabilizers() {
        let z4 = groups::cyclic(4);
        let a = sub(&z4, &[2]);
        assert_eq!(stabilizer_with_fixed_generators(&z4, &a, &[1]).unwrap().order(), 1);

        let v4 = groups::abelian(&[2, 2]);
        let factor = sub(&v4, &[1]);
        assert_eq!(aut0_generators(&v4, &factor, 1).unwrap().order(), 2);
        let whole = v4.whole();
        assert_eq!(stabilizer_with_fixed_generators(&v4, &whole, &[]).unwrap().order(), 6);
        assert_eq!(aut0_generators(&v4, &whole, 0).unwrap().order(), 6);
    }

    #[test]
    fn abelian_versus_nonabelian() {
        let d4 = groups::dihedral(4);
        let z2z4 = groups::abelian(&[2, 4]);
        let a = sub(&d4, &[1]);
        let a0 = sub(&z2z4, &[1]);
        assert_eq!(a0.order(), 4);
        let psi = GroupHom::identity(&quotient(&d4, &a).unwrap().group);
        let coset = extend_quotient_isomorphism(&d4, &z2z4, &a, &a0, &psi, 1).unwrap();
        assert!(coset.is_empty());
        assert_eq!(coset.size(), 0);
    }

    /// Every abelian normal subgroup of every group of order at most 16:
    /// Aut_0 and the coset over the identity quotient map match brute force.
    #[test]
    fn agrees_with_brute_force() {
        for (name, g) in groups::small_groups() {
            for a in abelian_normal_subgroups(&g) {
                let psi = identity_psi(&g, &a);
                let q = quotient(&g, &a).unwrap();
                let k = (0..=4)
                    .find(|&k| enumerate_quotient_generating_tuples(&g, &a, k).unwrap().next().is_some())
                    .unwrap();
                let coset = extend_quotient_isomorphism(&g, &g, &a, &a, &psi, k).unwrap();
                let brute = brute_coset(&g, &g, &a, &a, &psi);
                let got: BTreeSet<Vec<usize>> = coset.elements().iter().map(|f| f.images().to_vec()).collect();
                assert_eq!(got, brute, "{name} A = {:?} (|Q| = {})", a.elements(), q.group.order());
                for f in coset.elements() {
                    assert!(coset.contains(&f));
                }
            }
        }
    }

    #[test]
    fn coset_law_and_prescribed_images() {
        let g = groups::dihedral(4);
        let a = sub(&g, &[1]);
        let ctx = ExtensionContext::new(&g, &a, &[4]).unwrap();
        let aut0 = ctx.aut0().unwrap();
        let maps: Vec<GroupHom> = a
            .elements()
            .iter()
            .filter_map(|&x| ctx.with_prescribed_images(&ctx.source, &[g.mul(4, x)]).unwrap())
            .collect();
        assert_eq!(maps.len(), 4);
        for f1 in &maps {
            for f2 in &maps {
                let q = f2.inverse().unwrap().then(f1);
                assert!(aut0.contains(&Perm::from_images(q.images()).unwrap()));
            }
        }
    }

    #[test]
    fn group_ring_module_intertwines() {
        let g = groups::dihedral(4);
        let a = sub(&g, &[1]);
        let ctx = ExtensionContext::new(&g, &a, &[4]).unwrap();
        let m = group_ring_module(&g, &ctx.source.decomposition, &ctx.source.quotient, &ctx.sections).unwrap();
        assert_eq!(m.actions().len(), 2);
        let inv = EndoMatrix::from_columns(&[4], &[vec![3]]);
        assert!(verify_intertwiner(&ctx, &ctx.source, &[5], &inv).unwrap());
    }
}
