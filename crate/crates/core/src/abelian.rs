//! Finite abelian groups in invariant-factor form.
//!
//! Two flavours: subgroups of a Cayley table ([`decompose`]) and subgroups of
//! a coordinate group `Z_{m_1} + ... + Z_{m_s}` given by generating vectors
//! ([`decompose_lattice`]). Both reduce a relation lattice to Smith form.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::cayley::{subgroup_generated, GroupTable, Subgroup};
use crate::error::{Error, Result};
use crate::zlinalg::{lattice_basis, smith_normal_form, solve_mod, IntMatrix, Solve};

/// Index of a coordinate vector in mixed radix, first coordinate most
/// significant.
pub fn mixed_radix_index(v: &[u64], moduli: &[u64]) -> usize {
    v.iter()
        .zip(moduli)
        .fold(0usize, |acc, (&x, &m)| acc * m as usize + (x % m) as usize)
}

pub fn mixed_radix_coords(mut index: usize, moduli: &[u64]) -> Vec<u64> {
    let mut v = vec![0u64; moduli.len()];
    for i in (0..moduli.len()).rev() {
        let m = moduli[i] as usize;
        v[i] = (index % m) as u64;
        index /= m;
    }
    v
}

pub fn add_mod(a: &[u64], b: &[u64], moduli: &[u64]) -> Vec<u64> {
    a.iter()
        .zip(b)
        .zip(moduli)
        .map(|((&x, &y), &m)| ((x as u128 + y as u128) % m as u128) as u64)
        .collect()
}

pub fn scale_mod(a: &[u64], k: u64, moduli: &[u64]) -> Vec<u64> {
    a.iter()
        .zip(moduli)
        .map(|(&x, &m)| ((x as u128 * k as u128) % m as u128) as u64)
        .collect()
}

fn reduce_big(x: &BigInt, m: u64) -> u64 {
    x.mod_floor(&BigInt::from(m)).to_u64().expect("reduced residue fits")
}

/// `A ≅ Z_{n_1} + ... + Z_{n_t}` with `n_1 | ... | n_t`, all `n_i > 1`.
#[derive(Clone, Debug)]
pub struct AbelianDecomposition {
    subgroup: Subgroup,
    invariant_factors: Vec<u64>,
    cyclic_generators: Vec<usize>,
    /// coordinates of `subgroup.elements()[i]`
    coords: Vec<Vec<u64>>,
    /// element at each mixed-radix index
    by_index: Vec<usize>,
}

impl AbelianDecomposition {
    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn cyclic_generators(&self) -> &[usize] {
        &self.cyclic_generators
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn order(&self) -> usize {
        self.subgroup.order()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn express(&self, a: usize) -> Result<Vec<u64>> {
        self.subgroup
            .elements()
            .binary_search(&a)
            .map(|i| self.coords[i].clone())
            .map_err(|_| Error::NotMember { element: a })
    }

    /// Coordinates are reduced modulo the invariant factors first.
    pub fn from_coords(&self, v: &[u64]) -> usize {
        self.by_index[mixed_radix_index(v, &self.invariant_factors)]
    }

    /// Position of `a` in the mixed-radix enumeration of `A`.
    pub fn point_of(&self, a: usize) -> Result<usize> {
        Ok(mixed_radix_index(&self.express(a)?, &self.invariant_factors))
    }

    pub fn element_at(&self, point: usize) -> usize {
        self.by_index[point]
    }

    pub fn coords_at(&self, point: usize) -> Vec<u64> {
        mixed_radix_coords(point, &self.invariant_factors)
    }
}

/// Invariant-factor decomposition of an abelian subgroup of a Cayley table.
pub fn decompose(g: &GroupTable, a: &Subgroup) -> Result<AbelianDecomposition> {
    if let Some((x, y)) = g.commuting_witness(a) {
        return Err(Error::NotAbelian { a: x, b: y });
    }
    let mut gens: Vec<usize> = Vec::new();
    let mut span = g.trivial();
    for &x in a.elements() {
        if !span.contains(x) {
            gens.push(x);
            span = subgroup_generated(g, &gens);
        }
    }
    let s = gens.len();

    // breadth-first words in the greedy generators give integer coordinates
    let mut raw: Vec<Option<Vec<i64>>> = vec![None; g.order()];
    raw[g.identity()] = Some(vec![0; s]);
    let mut queue = VecDeque::from([g.identity()]);
    let mut relations: Vec<Vec<BigInt>> = Vec::new();
    while let Some(x) = queue.pop_front() {
        let cx = raw[x].clone().expect("visited");
        for (i, &gi) in gens.iter().enumerate() {
            let y = g.mul(x, gi);
            let mut step = cx.clone();
            step[i] += 1;
            match &raw[y] {
                None => {
                    raw[y] = Some(step);
                    queue.push_back(y);
                }
                Some(cy) => {
                    let rel: Vec<BigInt> = step.iter().zip(cy).map(|(p, q)| BigInt::from(p - q)).collect();
                    if rel.iter().any(|v| !v.is_zero()) {
                        relations.push(rel);
                    }
                }
            }
        }
    }
    let rel_basis = lattice_basis(relations);
    let (factors, new_gens, v) = if s == 0 {
        (Vec::new(), Vec::new(), IntMatrix::zeros(0, 0))
    } else {
        let mut m = IntMatrix::zeros(rel_basis.len(), s);
        for (i, row) in rel_basis.iter().enumerate() {
            for j in 0..s {
                m[(i, j)] = row[j].clone();
            }
        }
        let sm = smith_normal_form(&m);
        let d: Vec<u64> = sm.diagonal().iter().map(|x| x.to_u64().expect("finite factor")).collect();
        let order = a.order() as u64;
        let mut factors = Vec::new();
        let mut new_gens = Vec::new();
        for (j, &dj) in d.iter().enumerate() {
            let h = (0..s).fold(g.identity(), |acc, i| {
                let e = reduce_big(&sm.v_inv[(j, i)], order);
                g.mul(acc, g.pow(gens[i], e as i64))
            });
            factors.push(dj);
            new_gens.push(h);
        }
        (factors, new_gens, sm.v)
    };
    debug_assert_eq!(factors.len(), s);

    let keep: Vec<usize> = (0..factors.len()).filter(|&j| factors[j] > 1).collect();
    let invariant_factors: Vec<u64> = keep.iter().map(|&j| factors[j]).collect();
    let cyclic_generators: Vec<usize> = keep.iter().map(|&j| new_gens[j]).collect();
    let total: usize = invariant_factors.iter().product::<u64>() as usize;
    assert_eq!(total, a.order(), "relation lattice has the wrong index");

    let mut coords = Vec::with_capacity(a.order());
    let mut by_index = vec![usize::MAX; total];
    for &x in a.elements() {
        let cx = raw[x].as_ref().expect("every element reached");
        let c: Vec<u64> = keep
            .iter()
            .map(|&j| {
                let y: BigInt = (0..s).map(|i| BigInt::from(cx[i]) * &v[(i, j)]).sum();
                reduce_big(&y, factors[j])
            })
            .collect();
        by_index[mixed_radix_index(&c, &invariant_factors)] = x;
        coords.push(c);
    }
    debug_assert!(by_index.iter().all(|&x| x != usize::MAX));
    Ok(AbelianDecomposition {
        subgroup: a.clone(),
        invariant_factors,
        cyclic_generators,
        coords,
        by_index,
    })
}

/// All homomorphisms to `Z_e`, as images of the cyclic generators, in
/// lexicographic order.
pub fn all_homs_to_cyclic(dec: &AbelianDecomposition, e: u64) -> Vec<Vec<u64>> {
    let choices: Vec<Vec<u64>> = dec
        .invariant_factors()
        .iter()
        .map(|&n| {
            let step = e / n.gcd(&e);
            (0..n.gcd(&e)).map(|c| c * step).collect()
        })
        .collect();
    let mut out: Vec<Vec<u64>> = vec![Vec::new()];
    for c in &choices {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                c.iter().map(move |&y| {
                    let mut p = prefix.clone();
                    p.push(y);
                    p
                })
            })
            .collect();
    }
    out
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

fn to_residue(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

/// Subgroup of `Z_{m_1} + ... + Z_{m_s}` in echelon form: at most one pivot
/// row per column, pivot values dividing the column modulus, saturated so
/// that reduction decides membership. Rows may carry a tag vector (in a second
/// coordinate group) recording how each was formed from the inserted vectors.
#[derive(Clone, Debug)]
pub struct CoordSubgroup {
    moduli: Vec<u64>,
    tag_moduli: Vec<u64>,
    pivots: Vec<Option<(Vec<u64>, Vec<u64>)>>,
}

impl CoordSubgroup {
    pub fn new(moduli: &[u64]) -> Self {
        Self::with_tags(moduli, &[])
    }

    pub fn with_tags(moduli: &[u64], tag_moduli: &[u64]) -> Self {
        assert!(moduli.iter().all(|&m| m >= 1), "moduli must be positive");
        CoordSubgroup {
            moduli: moduli.to_vec(),
            tag_moduli: tag_moduli.to_vec(),
            pivots: vec![None; moduli.len()],
        }
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn insert(&mut self, v: &[u64]) {
        let tag = vec![0; self.tag_moduli.len()];
        self.insert_tagged(v, &tag);
    }

    pub fn insert_tagged(&mut self, v: &[u64], tag: &[u64]) {
        assert_eq!(v.len(), self.moduli.len(), "vector length");
        assert_eq!(tag.len(), self.tag_moduli.len(), "tag length");
        let v: Vec<u64> = v.iter().zip(&self.moduli).map(|(&x, &m)| x % m).collect();
        let mut work: Vec<(Vec<u64>, Vec<u64>)> = vec![(v, tag.to_vec())];
        while let Some((mut v, mut t)) = work.pop() {
            let mut c = 0;
            while c < v.len() {
                let a = v[c];
                if a == 0 {
                    c += 1;
                    continue;
                }
                let mc = self.moduli[c];
                match self.pivots[c].take() {
                    None => {
                        let (g, s, _) = ext_gcd(a as i128, mc as i128);
                        let s = to_residue(s, mc);
                        let np = self.scale(&v, s);
                        let nt = self.scale_tag(&t, s);
                        let q = a / g as u64;
                        let r = self.sub_scaled(&v, &np, q);
                        let rt = self.sub_scaled_tag(&t, &nt, q);
                        let sat = mc / g as u64;
                        work.push((self.scale(&np, sat), self.scale_tag(&nt, sat)));
                        work.push((r, rt));
                        self.pivots[c] = Some((np, nt));
                        break;
                    }
                    Some((b, bt)) => {
                        let bc = b[c];
                        if a % bc == 0 {
                            let q = a / bc;
                            v = self.sub_scaled(&v, &b, q);
                            t = self.sub_scaled_tag(&t, &bt, q);
                            self.pivots[c] = Some((b, bt));
                            c += 1;
                            continue;
                        }
                        let (g, s, u) = ext_gcd(a as i128, bc as i128);
                        let (s, u) = (to_residue(s, mc), to_residue(u, mc));
                        let np = self.add(&self.scale(&v, s), &self.scale(&b, u));
                        let nt = self.add_tag(&self.scale_tag(&t, s), &self.scale_tag(&bt, u));
                        let g = g as u64;
                        let r1 = self.sub_scaled(&v, &np, a / g);
                        let r1t = self.sub_scaled_tag(&t, &nt, a / g);
                        let r2 = self.sub_scaled(&b, &np, bc / g);
                        let r2t = self.sub_scaled_tag(&bt, &nt, bc / g);
                        let sat = mc / g;
                        work.push((self.scale(&np, sat), self.scale_tag(&nt, sat)));
                        work.push((r1, r1t));
                        work.push((r2, r2t));
                        self.pivots[c] = Some((np, nt));
                        break;
                    }
                }
            }
        }
    }

    /// Reduces `v`; returns the tag combination when `v` is a member.
    pub fn express(&self, v: &[u64]) -> Option<Vec<u64>> {
        let mut v: Vec<u64> = v.iter().zip(&self.moduli).map(|(&x, &m)| x % m).collect();
        let mut t = vec![0; self.tag_moduli.len()];
        for c in 0..v.len() {
            if v[c] == 0 {
                continue;
            }
            let (b, bt) = self.pivots[c].as_ref()?;
            if v[c] % b[c] != 0 {
                return None;
            }
            let q = v[c] / b[c];
            v = self.sub_scaled(&v, b, q);
            t = self.add_tag(&t, &self.scale_tag(bt, q));
        }
        Some(t)
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.express(v).is_some()
    }

    pub fn size(&self) -> u128 {
        self.rows()
            .iter()
            .map(|&(c, b, _)| (self.moduli[c] / b[c]) as u128)
            .product()
    }

    /// Pivot rows (with tags) in column order.
    pub fn rows(&self) -> Vec<(usize, &[u64], &[u64])> {
        self.pivots
            .iter()
            .enumerate()
            .filter_map(|(c, p)| p.as_ref().map(|(b, t)| (c, b.as_slice(), t.as_slice())))
            .collect()
    }

    /// Every member exactly once.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![vec![0u64; self.moduli.len()]];
        for (c, b, _) in self.rows() {
            let steps = self.moduli[c] / b[c];
            out = out
                .into_iter()
                .flat_map(|base| {
                    (0..steps)
                        .map(|q| self.add(&base, &self.scale(b, q)))
                        .collect::<Vec<_>>()
                })
                .collect();
        }
        out
    }

    fn scale(&self, v: &[u64], k: u64) -> Vec<u64> {
        scale_mod(v, k, &self.moduli)
    }

    fn scale_tag(&self, v: &[u64], k: u64) -> Vec<u64> {
        scale_mod(v, k, &self.tag_moduli)
    }

    fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        add_mod(a, b, &self.moduli)
    }

    fn add_tag(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        add_mod(a, b, &self.tag_moduli)
    }

    /// `a - q b`
    fn sub_scaled(&self, a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.moduli)
            .map(|((&x, &y), &m)| {
                let qy = (q as u128 * y as u128 % m as u128) as u64;
                (x + m - qy) % m
            })
            .collect()
    }

    fn sub_scaled_tag(&self, a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.tag_moduli)
            .map(|((&x, &y), &m)| {
                let qy = (q as u128 * y as u128 % m as u128) as u64;
                (x + m - qy) % m
            })
            .collect()
    }
}

/// Invariant-factor decomposition of the subgroup of `Z_{m_1} + ... + Z_{m_s}`
/// generated by `gens`.
#[derive(Clone, Debug)]
pub struct LatticeDecomposition {
    moduli: Vec<u64>,
    invariant_factors: Vec<u64>,
    basis: Vec<Vec<u64>>,
    echelon: CoordSubgroup,
}

impl LatticeDecomposition {
    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    /// Ambient vectors of the cyclic generators.
    pub fn basis(&self) -> &[Vec<u64>] {
        &self.basis
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn order(&self) -> u128 {
        self.invariant_factors.iter().map(|&d| d as u128).product()
    }

    /// Coordinates of an ambient vector with respect to [`Self::basis`].
    pub fn express(&self, v: &[u64]) -> Option<Vec<u64>> {
        self.echelon.express(v)
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.echelon.contains(v)
    }

    pub fn element(&self, coords: &[u64]) -> Vec<u64> {
        coords
            .iter()
            .zip(&self.basis)
            .fold(vec![0; self.moduli.len()], |acc, (&c, b)| {
                add_mod(&acc, &scale_mod(b, c, &self.moduli), &self.moduli)
            })
    }
}

pub fn decompose_lattice(moduli: &[u64], gens: &[Vec<u64>]) -> LatticeDecomposition {
    let r = gens.len();
    let s = moduli.len();
    let mut factors_basis: Vec<(u64, Vec<u64>)> = Vec::new();
    if r > 0 {
        // relations: x in Z^r with sum x_i g_i = 0
        let mut a = IntMatrix::zeros(s, r);
        for (i, g) in gens.iter().enumerate() {
            assert_eq!(g.len(), s, "generator length");
            for j in 0..s {
                a[(j, i)] = BigInt::from(g[j]);
            }
        }
        let m: Vec<BigInt> = moduli.iter().map(|&x| BigInt::from(x)).collect();
        let rel = match solve_mod(&a, &vec![BigInt::zero(); s], &m) {
            Solve::Feasible(sol) => sol.nullspace,
            Solve::Infeasible => unreachable!("homogeneous systems are feasible"),
        };
        let mut rm = IntMatrix::zeros(rel.len(), r);
        for (i, row) in rel.iter().enumerate() {
            for j in 0..r {
                rm[(i, j)] = row[j].clone();
            }
        }
        let sm = smith_normal_form(&rm);
        let diag = sm.diagonal();
        for j in 0..r {
            let dj = diag[j].to_u64().expect("finite lattice");
            if dj <= 1 {
                continue;
            }
            let mut b = vec![0u64; s];
            for i in 0..r {
                let coeff = &sm.v_inv[(j, i)];
                for k in 0..s {
                    let c = reduce_big(coeff, moduli[k]);
                    b[k] = ((b[k] as u128 + c as u128 * gens[i][k] as u128) % moduli[k] as u128) as u64;
                }
            }
            factors_basis.push((dj, b));
        }
    }
    let invariant_factors: Vec<u64> = factors_basis.iter().map(|(d, _)| *d).collect();
    let basis: Vec<Vec<u64>> = factors_basis.into_iter().map(|(_, b)| b).collect();
    let mut echelon = CoordSubgroup::with_tags(moduli, &invariant_factors);
    for (j, b) in basis.iter().enumerate() {
        let mut t = vec![0; basis.len()];
        t[j] = 1;
        echelon.insert_tagged(b, &t);
    }
    LatticeDecomposition {
        moduli: moduli.to_vec(),
        invariant_factors,
        basis,
        echelon,
    }
}
