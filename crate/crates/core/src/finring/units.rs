//! Unit groups of finite rings as permutation groups.
//!
//! Per prime component `R_p` the sequence `1 -> 1+J -> R_p^× -> (R_p/J)^× -> 1`
//! is exact. Generators of `1+J` come from the filtration by powers of `J`;
//! generators of `(R_p/J)^×` come from `GL_n(F_q)` on each simple component
//! and lift to units of `R_p` by taking any preimage.

use super::field::gl_generators;
use super::fp::Subspace;
use super::radical::{jacobson_radical, radical_fp, reduce_mod_p};
use super::wedderburn::wedderburn;
use super::{prime_components, ActionRing, Ideal, StructuredRing};
use crate::abelian::CoordSubgroup;
use crate::error::{Error, Result};
use crate::permgrp::{Perm, StabChainGroup};

/// `R^×` as a permutation group together with the ring elements whose
/// permutations generate it.
#[derive(Clone, Debug)]
pub struct UnitGroup {
    pub group: StabChainGroup,
    /// `group.generators()[i]` is the permutation of `generators[i]`
    pub generators: Vec<Vec<u64>>,
    pub degree: usize,
}

impl UnitGroup {
    pub fn order(&self) -> u128 {
        self.group.order()
    }
}

fn span_rows(s: &CoordSubgroup) -> Vec<Vec<u64>> {
    s.rows().into_iter().map(|(_, v, _)| v.to_vec()).collect()
}

/// Generators `1 + g` of `1 + J` for a nilpotent ideal `J`.
pub fn unipotent_generators(r: &StructuredRing, j: &Ideal) -> Result<Vec<Vec<u64>>> {
    let mut out = Vec::new();
    let mut level = Ideal {
        generators: span_rows(&r.span(&j.generators)),
    };
    while !level.is_zero(r) {
        let next = level.product(r, &level);
        let next_span = r.span(&next.generators);
        if next_span.size() == r.span(&level.generators).size() {
            return Err(Error::NotNilpotent);
        }
        let mut kept = next_span;
        for g in &level.generators {
            if !kept.contains(g) {
                kept.insert(g);
                out.push(r.add(r.one(), g));
            }
        }
        level = next;
    }
    Ok(out)
}

/// `R/J` for `R` of `p`-power order, on the complement coordinates of
/// `J/pR` inside `R/pR`.
struct Semisimple {
    rbar: StructuredRing,
    rad: Subspace,
    cols: Vec<usize>,
    ring: StructuredRing,
}

impl Semisimple {
    fn new(r: &StructuredRing, p: u64) -> Self {
        let rbar = reduce_mod_p(r, p);
        let rad = radical_fp(&rbar);
        let cols = rad.complement_columns();
        let t = cols.len();
        let lift = |a: usize| {
            let mut v = rbar.zero();
            v[cols[a]] = 1;
            v
        };
        let mut alpha = vec![0u64; t * t * t];
        for a in 0..t {
            for b in 0..t {
                let prod = rad.reduce(&rbar.mul(&lift(a), &lift(b)));
                for (c, &col) in cols.iter().enumerate() {
                    alpha[(a * t + b) * t + c] = prod[col];
                }
            }
        }
        let one_red = rad.reduce(rbar.one());
        let one = cols.iter().map(|&c| one_red[c]).collect();
        let ring = StructuredRing::from_flat(vec![p; t], alpha, one).expect("quotient by the radical");
        Semisimple { rbar, rad, cols, ring }
    }

    /// A preimage in `R` of an element of `R/J`.
    fn lift(&self, s: &[u64]) -> Vec<u64> {
        let mut v = self.rbar.zero();
        for (a, &col) in self.cols.iter().enumerate() {
            v[col] = s[a];
        }
        v
    }
}

/// Units of a ring of `p`-power order whose images generate `(R/J)^×`,
/// followed by generators of `1 + J`.
fn primary_unit_generators(r: &StructuredRing, p: u64) -> Result<Vec<Vec<u64>>> {
    let ss = Semisimple::new(r, p);
    debug_assert!(ss.rad.dim() + ss.cols.len() == r.rank());
    let s = &ss.ring;
    let mut out = Vec::new();
    for comp in wedderburn(s)? {
        let rest = s.sub(s.one(), &comp.idempotent);
        for g in gl_generators(comp.n, &comp.field) {
            let unit = s.add(&comp.from_matrix(&g), &rest);
            out.push(ss.lift(&unit));
        }
    }
    let j = jacobson_radical(r)?;
    out.extend(unipotent_generators(r, &j)?);
    Ok(out)
}

/// Inverse of a unit by powering; `None` for a non-unit.
pub fn unit_inverse(r: &StructuredRing, u: &[u64]) -> Option<Vec<u64>> {
    let mut x = u.to_vec();
    let mut prev = r.one().to_vec();
    for _ in 0..r.size() {
        if x == r.one() {
            return Some(prev);
        }
        prev = x.clone();
        x = r.mul(&x, u);
    }
    None
}

/// `R^×` acting on `A` through `action`, or on `R` by left multiplication.
pub fn unit_group(r: &StructuredRing, action: Option<&ActionRing>) -> Result<UnitGroup> {
    if let Some(act) = action {
        if act.ring() != r {
            return Err(Error::InvalidAction("action is for a different ring".into()));
        }
    }
    let mut generators = Vec::new();
    for comp in prime_components(r) {
        let rest = r.sub(r.one(), &comp.idempotent);
        for u in primary_unit_generators(&comp.ring, comp.p)? {
            generators.push(r.add(&comp.embed(r, &u), &rest));
        }
    }
    let (degree, perms) = match action {
        Some(act) => {
            let perms = generators
                .iter()
                .map(|u| {
                    act.action_matrix(u)
                        .to_perm()
                        .ok_or_else(|| Error::InvalidAction("a unit acts non-bijectively".into()))
                })
                .collect::<Result<Vec<Perm>>>()?;
            (act.module_size(), perms)
        }
        None => {
            let size = usize::try_from(r.size()).map_err(|_| Error::SizeGuard {
                size: usize::MAX,
                limit: usize::MAX,
            })?;
            let perms = generators
                .iter()
                .map(|u| {
                    let images: Vec<usize> = (0..size).map(|i| r.index_of(&r.mul(u, &r.element_at(i)))).collect();
                    Perm::from_images(&images)
                })
                .collect::<Result<Vec<Perm>>>()?;
            (size, perms)
        }
    };
    let group = StabChainGroup::build(degree, &perms)?;
    Ok(UnitGroup {
        group,
        generators,
        degree,
    })
}

/// `|R^×|` by the exact sequence, without building permutations.
pub fn unit_count(r: &StructuredRing) -> Result<u128> {
    let mut total = 1u128;
    for comp in prime_components(r) {
        let ss = Semisimple::new(&comp.ring, comp.p);
        let j = jacobson_radical(&comp.ring)?;
        let mut count = j.size(&comp.ring);
        for c in wedderburn(&ss.ring)? {
            let q = c.q() as u128;
            let n = c.n as u32;
            count *= (0..n).map(|i| q.pow(n) - q.pow(i)).product::<u128>();
        }
        total *= count;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finring::{commutant_ring, FiniteField};
    use crate::groups;

    fn units_by_trial(r: &StructuredRing) -> Vec<Vec<u64>> {
        let elems = r.elements(1 << 12).unwrap();
        elems
            .iter()
            .filter(|x| elems.iter().any(|y| r.mul(x, y) == r.one() && r.mul(y, x) == r.one()))
            .cloned()
            .collect()
    }

    fn check(r: &StructuredRing) -> u128 {
        let ug = unit_group(r, None).unwrap();
        let trial = units_by_trial(r);
        assert_eq!(ug.order(), trial.len() as u128, "{r:?}");
        assert_eq!(unit_count(r).unwrap(), trial.len() as u128);
        for u in &ug.generators {
            let inv = unit_inverse(r, u).expect("generator is a unit");
            assert_eq!(r.mul(u, &inv), r.one());
        }
        ug.order()
    }

    #[test]
    fn examples() {
        let z9 = StructuredRing::cyclic(9);
        let j = crate::finring::jacobson_radical(&z9).unwrap();
        let gens = unipotent_generators(&z9, &j).unwrap();
        assert_eq!(gens, vec![vec![4]]);
        assert_eq!(check(&z9), 6);
        let ut3 = StructuredRing::upper_triangular(3, 2);
        let j = crate::finring::jacobson_radical(&ut3).unwrap();
        let gens = unipotent_generators(&ut3, &j).unwrap();
        let perms: Vec<Perm> = gens
            .iter()
            .map(|u| {
                let imgs: Vec<usize> = (0..64).map(|i| ut3.index_of(&ut3.mul(u, &ut3.element_at(i)))).collect();
                Perm::from_images(&imgs).unwrap()
            })
            .collect();
        assert_eq!(StabChainGroup::build(64, &perms).unwrap().order(), 8);
        assert!(unipotent_generators(&z9, &Ideal { generators: vec![] }).unwrap().is_empty());
        assert!(matches!(
            unipotent_generators(&z9, &Ideal { generators: vec![vec![1]] }),
            Err(Error::NotNilpotent)
        ));
    }

    #[test]
    fn acting_on_modules() {
        let z8 = StructuredRing::cyclic(8);
        let act = ActionRing::new(z8.clone(), vec![8], &[vec![vec![1]]]).unwrap();
        let ug = unit_group(&z8, Some(&act)).unwrap();
        assert_eq!((ug.order(), ug.degree), (4, 8));

        let end22 = commutant_ring(&[2, 2], &[]);
        let ug = unit_group(end22.ring(), Some(&end22.action)).unwrap();
        assert_eq!((ug.order(), ug.degree), (6, 4));

        let end24 = commutant_ring(&[2, 4], &[]);
        let ug = unit_group(end24.ring(), Some(&end24.action)).unwrap();
        assert_eq!(ug.order(), 8);
        // every invertible endomorphism of Z_2 + Z_4 is in the group
        let mut auts = 0;
        for idx in 0..end24.ring().size() as usize {
            let m = end24.element(&end24.ring().element_at(idx));
            if let Some(perm) = m.to_perm() {
                auts += 1;
                assert!(ug.group.contains(&perm));
            }
        }
        assert_eq!(auts, 8);
    }

    #[test]
    fn agrees_with_trial_division() {
        let f4 = FiniteField::new(2, vec![1, 1, 1]).unwrap();
        let rings = vec![
            StructuredRing::cyclic(2),
            StructuredRing::cyclic(8),
            StructuredRing::cyclic(12),
            StructuredRing::cyclic(30),
            StructuredRing::cyclic(27),
            StructuredRing::upper_triangular(2, 2),
            StructuredRing::upper_triangular(2, 3),
            StructuredRing::upper_triangular(2, 4),
            StructuredRing::upper_triangular(3, 2),
            StructuredRing::matrix_ring(2, 2),
            StructuredRing::matrix_ring(2, 3),
            StructuredRing::field(&f4),
            StructuredRing::field(&f4).direct_sum(&StructuredRing::cyclic(6)),
            StructuredRing::group_ring(2, &groups::cyclic(4)),
            StructuredRing::group_ring(3, &groups::cyclic(3)),
            StructuredRing::group_ring(4, &groups::cyclic(3)),
            StructuredRing::group_ring(2, &groups::abelian(&[2, 2])),
            StructuredRing::group_ring(6, &groups::cyclic(2)),
            StructuredRing::group_ring(2, &groups::symmetric(3)),
        ];
        for r in &rings {
            check(r);
        }
    }

    #[test]
    fn unipotent_law() {
        for r in [
            StructuredRing::cyclic(16),
            StructuredRing::upper_triangular(3, 2),
            StructuredRing::group_ring(2, &groups::abelian(&[2, 2])),
            StructuredRing::group_ring(3, &groups::cyclic(3)),
        ] {
            let j = crate::finring::jacobson_radical(&r).unwrap();
            let gens = unipotent_generators(&r, &j).unwrap();
            let size = r.size() as usize;
            let perms: Vec<Perm> = gens
                .iter()
                .map(|u| {
                    let imgs: Vec<usize> = (0..size).map(|i| r.index_of(&r.mul(u, &r.element_at(i)))).collect();
                    Perm::from_images(&imgs).unwrap()
                })
                .collect();
            assert_eq!(StabChainGroup::build(size, &perms).unwrap().order(), j.size(&r));
        }
    }
}
