//! Exhaustive reference answers for small inputs.
//!
//! Nothing here uses the structural machinery of the other modules: maps are
//! enumerated from generator images and checked on the whole table, and
//! units are counted one element at a time.

use crate::abelian::CoordSubgroup;
use crate::cayley::{check_hom_from_images, subgroup_generated, GroupHom, GroupTable};
use crate::error::{Error, Result};
use crate::finring::StructuredRing;

/// Default bound on group orders for the isomorphism oracles.
pub const DEFAULT_GROUP_GUARD: usize = 16;
/// Default bound on ring orders for the unit oracle.
pub const DEFAULT_RING_GUARD: usize = 4096;

fn guard(size: usize, limit: usize) -> Result<()> {
    if size > limit {
        Err(Error::SizeGuard { size, limit })
    } else {
        Ok(())
    }
}

/// A generating set picked greedily, largest element orders first.
pub fn greedy_generators(g: &GroupTable) -> Vec<usize> {
    let mut elems: Vec<usize> = (0..g.order()).collect();
    elems.sort_by_key(|&x| std::cmp::Reverse(g.element_order(x)));
    let mut gens = Vec::new();
    let mut span = subgroup_generated(g, &gens);
    for x in elems {
        if span.order() == g.order() {
            break;
        }
        if !span.contains(x) {
            gens.push(x);
            span = subgroup_generated(g, &gens);
        }
    }
    gens
}

/// Extends `gens[i] -> images[i]` along right multiplication, or `None` on
/// a conflict.
fn extend_images(g: &GroupTable, g0: &GroupTable, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; g.order()];
    map[g.identity()] = g0.identity();
    let mut stack = vec![g.identity()];
    while let Some(x) = stack.pop() {
        for (&s, &t) in gens.iter().zip(images) {
            let y = g.mul(x, s);
            let v = g0.mul(map[x], t);
            if map[y] == usize::MAX {
                map[y] = v;
                stack.push(y);
            } else if map[y] != v {
                return None;
            }
        }
    }
    Some(map)
}

/// Every isomorphism `G -> G0`, in lexicographic order of generator images.
pub fn all_isomorphisms(g: &GroupTable, g0: &GroupTable, limit: usize) -> Result<Vec<GroupHom>> {
    guard(g.order().max(g0.order()), limit)?;
    if g.order() != g0.order() {
        return Ok(Vec::new());
    }
    let gens = greedy_generators(g);
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| (0..g0.order()).filter(|&y| g0.element_order(y) == g.element_order(s)).collect())
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; gens.len()];
    if candidates.iter().any(Vec::is_empty) {
        return Ok(out);
    }
    loop {
        let images: Vec<usize> = idx.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
        if let Some(map) = extend_images(g, g0, &gens, &images) {
            if let Ok(hom) = check_hom_from_images(g, g0, &map) {
                if hom.is_bijective() {
                    out.push(hom);
                }
            }
        }
        let mut i = gens.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < candidates[i].len() {
                break;
            }
            idx[i] = 0;
        }
    }
}

pub fn are_isomorphic(g: &GroupTable, g0: &GroupTable, limit: usize) -> Result<bool> {
    Ok(!all_isomorphisms(g, g0, limit)?.is_empty())
}

pub fn automorphism_count(g: &GroupTable, limit: usize) -> Result<usize> {
    Ok(all_isomorphisms(g, g, limit)?.len())
}

/// Whether left multiplication by `x` is onto, which in a finite ring is
/// equivalent to `x` being a unit.
pub fn is_unit_by_trial(r: &StructuredRing, x: &[u64]) -> bool {
    let mut span = CoordSubgroup::new(r.moduli());
    for j in 0..r.rank() {
        span.insert(&r.mul(x, &r.basis(j)));
    }
    span.size() == r.size()
}

/// `|R^x|` by testing every element.
pub fn unit_count_by_trial(r: &StructuredRing, limit: usize) -> Result<u128> {
    let size = usize::try_from(r.size()).unwrap_or(usize::MAX);
    guard(size, limit)?;
    Ok((0..size).filter(|&i| is_unit_by_trial(r, &r.element_at(i))).count() as u128)
}

/// Reference answers for a pair of groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub isomorphisms: Vec<GroupHom>,
    pub aut_order: usize,
}

pub fn brute_force_oracles(g: &GroupTable, g0: &GroupTable, limit: usize) -> Result<OracleReport> {
    Ok(OracleReport {
        isomorphisms: all_isomorphisms(g, g0, limit)?,
        aut_order: automorphism_count(g, limit)?,
    })
}
