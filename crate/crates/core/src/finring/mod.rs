//! Finite unitary rings given by cyclic additive generators and structure
//! constants, and their unit groups.
//!
//! Elements are coordinate vectors over `Z_{n_1} + ... + Z_{n_t}`. Products of
//! generators are `e_i e_j = sum_k alpha_ijk e_k`.

pub mod endo;
pub mod field;
pub mod fp;
pub mod poly;
pub mod radical;
pub mod units;
pub mod wedderburn;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::abelian::{add_mod, mixed_radix_coords, mixed_radix_index, scale_mod, CoordSubgroup};
use crate::cayley::GroupTable;
use crate::error::{Error, Result};

pub use endo::{commutant_ring, end_ring_generators, intertwiner_lattice, Commutant, EndoMatrix};
pub use field::{field_unit_generator, gl_generators, FiniteField, FqMatrix};
pub use radical::jacobson_radical;
pub use units::{unipotent_generators, unit_count, unit_group, unit_inverse, UnitGroup};
pub use wedderburn::{wedderburn, MatrixRingIso};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuredRing {
    moduli: Vec<u64>,
    /// `alpha[(i * t + j) * t + k]`, reduced mod `n_k`
    alpha: Vec<u64>,
    one: Vec<u64>,
}

impl StructuredRing {
    pub fn new(moduli: Vec<u64>, alpha: &[Vec<Vec<u64>>], one: Vec<u64>) -> Result<Self> {
        let t = moduli.len();
        if alpha.len() != t || alpha.iter().any(|a| a.len() != t || a.iter().any(|b| b.len() != t)) {
            return Err(Error::InvalidRing(format!("alpha must be {t}x{t}x{t}")));
        }
        let flat = alpha.iter().flatten().flatten().copied().collect();
        Self::from_flat(moduli, flat, one)
    }

    pub fn from_flat(moduli: Vec<u64>, alpha: Vec<u64>, one: Vec<u64>) -> Result<Self> {
        let t = moduli.len();
        if moduli.iter().any(|&m| m < 2) {
            return Err(Error::InvalidRing("additive generator orders must be at least 2".into()));
        }
        if alpha.len() != t * t * t || one.len() != t {
            return Err(Error::InvalidRing("structure constant or identity length".into()));
        }
        let alpha = alpha
            .iter()
            .enumerate()
            .map(|(idx, &a)| a % moduli[idx % t])
            .collect();
        let one = one.iter().zip(&moduli).map(|(&x, &m)| x % m).collect();
        let ring = StructuredRing { moduli, alpha, one };
        ring.validate()?;
        Ok(ring)
    }

    fn validate(&self) -> Result<()> {
        let t = self.rank();
        for i in 0..t {
            for j in 0..t {
                for k in 0..t {
                    let a = self.alpha(i, j, k) as u128;
                    let nk = self.moduli[k] as u128;
                    if a * self.moduli[i] as u128 % nk != 0 || a * self.moduli[j] as u128 % nk != 0 {
                        return Err(Error::InvalidRing(format!(
                            "e_{i} e_{j} is not well defined in coordinate {k}"
                        )));
                    }
                }
            }
        }
        for i in 0..t {
            for j in 0..t {
                let eij = self.mul(&self.basis(i), &self.basis(j));
                for l in 0..t {
                    let left = self.mul(&eij, &self.basis(l));
                    let right = self.mul(&self.basis(i), &self.mul(&self.basis(j), &self.basis(l)));
                    if left != right {
                        return Err(Error::InvalidRing(format!("not associative on generators {i}, {j}, {l}")));
                    }
                }
            }
        }
        for i in 0..t {
            let e = self.basis(i);
            if self.mul(&self.one, &e) != e || self.mul(&e, &self.one) != e {
                return Err(Error::InvalidRing(format!("identity fails on generator {i}")));
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn alpha(&self, i: usize, j: usize, k: usize) -> u64 {
        let t = self.rank();
        self.alpha[(i * t + j) * t + k]
    }

    pub fn alpha_nested(&self) -> Vec<Vec<Vec<u64>>> {
        let t = self.rank();
        (0..t)
            .map(|i| (0..t).map(|j| (0..t).map(|k| self.alpha(i, j, k)).collect()).collect())
            .collect()
    }

    pub fn one(&self) -> &[u64] {
        &self.one
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.rank()]
    }

    pub fn basis(&self, i: usize) -> Vec<u64> {
        let mut v = self.zero();
        v[i] = 1;
        v
    }

    pub fn size(&self) -> u128 {
        self.moduli.iter().map(|&m| m as u128).product()
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        add_mod(x, y, &self.moduli)
    }

    pub fn neg(&self, x: &[u64]) -> Vec<u64> {
        x.iter().zip(&self.moduli).map(|(&a, &m)| (m - a % m) % m).collect()
    }

    pub fn sub(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        self.add(x, &self.neg(y))
    }

    pub fn scale(&self, x: &[u64], c: u64) -> Vec<u64> {
        scale_mod(x, c, &self.moduli)
    }

    pub fn mul(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let t = self.rank();
        let mut acc = vec![0u128; t];
        for i in 0..t {
            if x[i] == 0 {
                continue;
            }
            for j in 0..t {
                if y[j] == 0 {
                    continue;
                }
                let c = x[i] as u128 * y[j] as u128;
                let base = (i * t + j) * t;
                for k in 0..t {
                    let a = self.alpha[base + k];
                    if a != 0 {
                        let nk = self.moduli[k] as u128;
                        acc[k] = (acc[k] + c % nk * a as u128) % nk;
                    }
                }
            }
        }
        acc.into_iter().map(|v| v as u64).collect()
    }

    pub fn pow(&self, x: &[u64], mut e: u64) -> Vec<u64> {
        let mut result = self.one.clone();
        let mut base = x.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }

    pub fn is_zero(&self, x: &[u64]) -> bool {
        x.iter().all(|&v| v == 0)
    }

    pub fn index_of(&self, x: &[u64]) -> usize {
        mixed_radix_index(x, &self.moduli)
    }

    pub fn element_at(&self, index: usize) -> Vec<u64> {
        mixed_radix_coords(index, &self.moduli)
    }

    /// Every element in mixed-radix order; guarded by `limit`.
    pub fn elements(&self, limit: usize) -> Result<Vec<Vec<u64>>> {
        let size = self.size();
        if size > limit as u128 {
            return Err(Error::SizeGuard {
                size: size.min(usize::MAX as u128) as usize,
                limit,
            });
        }
        Ok((0..size as usize).map(|i| self.element_at(i)).collect())
    }

    /// The prime when every generator has order `p` (an `F_p`-algebra).
    pub fn prime_field(&self) -> Option<u64> {
        let p = *self.moduli.first()?;
        (self.moduli.iter().all(|&m| m == p) && field::prime_factors(p) == vec![p]).then_some(p)
    }

    /// Additive span of the given elements.
    pub fn span(&self, gens: &[Vec<u64>]) -> CoordSubgroup {
        let mut s = CoordSubgroup::new(&self.moduli);
        for g in gens {
            s.insert(g);
        }
        s
    }

    pub fn cyclic(n: u64) -> Self {
        StructuredRing::from_flat(vec![n], vec![1 % n], vec![1]).expect("Z_n is a ring")
    }

    /// `M_n(Z_p)` on the matrix units `E_ij` (index `i n + j`).
    pub fn matrix_ring(n: usize, p: u64) -> Self {
        let t = n * n;
        let mut alpha = vec![0u64; t * t * t];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let (a, b, c) = (i * n + j, j * n + l, i * n + l);
                    alpha[(a * t + b) * t + c] = 1;
                }
            }
        }
        let mut one = vec![0; t];
        for i in 0..n {
            one[i * n + i] = 1;
        }
        StructuredRing::from_flat(vec![p; t], alpha, one).expect("matrix ring")
    }

    /// Upper-triangular `n x n` matrices over `Z_m`.
    pub fn upper_triangular(n: usize, m: u64) -> Self {
        let units: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let t = units.len();
        let pos = |i: usize, j: usize| units.iter().position(|&u| u == (i, j)).expect("upper");
        let mut alpha = vec![0u64; t * t * t];
        for (a, &(i, j)) in units.iter().enumerate() {
            for (b, &(k, l)) in units.iter().enumerate() {
                if j == k {
                    alpha[(a * t + b) * t + pos(i, l)] = 1;
                }
            }
        }
        let mut one = vec![0; t];
        for i in 0..n {
            one[pos(i, i)] = 1;
        }
        StructuredRing::from_flat(vec![m; t], alpha, one).expect("triangular ring")
    }

    /// `F_p[x]/(poly)` on the basis `1, x, ..., x^(f-1)`.
    pub fn field(field: &FiniteField) -> Self {
        let f = field.f;
        let mut alpha = vec![0u64; f * f * f];
        for i in 0..f {
            for j in 0..f {
                let prod = field.x_pow(i + j);
                for k in 0..f {
                    alpha[(i * f + j) * f + k] = prod[k];
                }
            }
        }
        let one = field.one();
        StructuredRing::from_flat(vec![field.p; f], alpha, one).expect("field")
    }

    /// Group ring `Z_n[H]` on the group elements.
    pub fn group_ring(n: u64, h: &GroupTable) -> Self {
        let t = h.order();
        let mut alpha = vec![0u64; t * t * t];
        for a in 0..t {
            for b in 0..t {
                alpha[(a * t + b) * t + h.mul(a, b)] = 1;
            }
        }
        let mut one = vec![0; t];
        one[h.identity()] = 1;
        StructuredRing::from_flat(vec![n; t], alpha, one).expect("group ring")
    }

    pub fn direct_sum(&self, other: &StructuredRing) -> Self {
        let (s, t) = (self.rank(), other.rank());
        let n = s + t;
        let mut alpha = vec![0u64; n * n * n];
        for i in 0..s {
            for j in 0..s {
                for k in 0..s {
                    alpha[(i * n + j) * n + k] = self.alpha(i, j, k);
                }
            }
        }
        for i in 0..t {
            for j in 0..t {
                for k in 0..t {
                    alpha[((s + i) * n + s + j) * n + s + k] = other.alpha(i, j, k);
                }
            }
        }
        let moduli = self.moduli.iter().chain(&other.moduli).copied().collect();
        let one = self.one.iter().chain(&other.one).copied().collect();
        StructuredRing::from_flat(moduli, alpha, one).expect("direct sum")
    }
}

/// A ring acting on the right of `Z_{m_1} + ... + Z_{m_s}`: generator `e_j`
/// acts by the matrix `actions[j]` (column `i` is the image of `a_i`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionRing {
    ring: StructuredRing,
    module_moduli: Vec<u64>,
    actions: Vec<EndoMatrix>,
}

impl ActionRing {
    /// `beta[i][j][k]`: `a_i^{e_j} = sum_k beta_ijk a_k`.
    pub fn new(ring: StructuredRing, module_moduli: Vec<u64>, beta: &[Vec<Vec<u64>>]) -> Result<Self> {
        let (t, m) = (ring.rank(), module_moduli.len());
        if beta.len() != m || beta.iter().any(|b| b.len() != t || b.iter().any(|c| c.len() != m)) {
            return Err(Error::InvalidAction(format!("beta must be {m}x{t}x{m}")));
        }
        let actions = (0..t)
            .map(|j| {
                let mut data = vec![0u64; m * m];
                for i in 0..m {
                    for k in 0..m {
                        data[k * m + i] = beta[i][j][k] % module_moduli[k];
                    }
                }
                EndoMatrix::from_data(&module_moduli, data)
            })
            .collect();
        Self::from_matrices(ring, module_moduli, actions)
    }

    pub fn from_matrices(ring: StructuredRing, module_moduli: Vec<u64>, actions: Vec<EndoMatrix>) -> Result<Self> {
        if module_moduli.iter().any(|&n| n < 2) {
            return Err(Error::InvalidAction("module generator orders must be at least 2".into()));
        }
        let a = ActionRing {
            ring,
            module_moduli,
            actions,
        };
        a.validate()?;
        Ok(a)
    }

    fn validate(&self) -> Result<()> {
        let t = self.ring.rank();
        for (j, mj) in self.actions.iter().enumerate() {
            if !mj.is_homomorphism() {
                return Err(Error::InvalidAction(format!("generator {j} does not act additively")));
            }
            if !mj.scale(self.ring.moduli()[j]).is_zero() {
                return Err(Error::InvalidAction(format!("order of generator {j} does not annihilate its action")));
            }
        }
        if !self.action_matrix(self.ring.one()).is_identity() {
            return Err(Error::InvalidAction("identity does not act trivially".into()));
        }
        for i in 0..t {
            for j in 0..t {
                let prod = self.action_matrix(&self.ring.mul(&self.ring.basis(i), &self.ring.basis(j)));
                let composed = self.actions[i].then(&self.actions[j]);
                if prod != composed {
                    return Err(Error::InvalidAction(format!(
                        "acting by e_{i} then e_{j} differs from acting by e_{i} e_{j}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &StructuredRing {
        &self.ring
    }

    pub fn module_moduli(&self) -> &[u64] {
        &self.module_moduli
    }

    pub fn actions(&self) -> &[EndoMatrix] {
        &self.actions
    }

    pub fn module_size(&self) -> usize {
        self.module_moduli.iter().product::<u64>() as usize
    }

    pub fn action_matrix(&self, x: &[u64]) -> EndoMatrix {
        x.iter()
            .zip(&self.actions)
            .fold(EndoMatrix::zero(&self.module_moduli), |acc, (&c, m)| acc.add(&m.scale(c)))
    }

    /// `beta[i][j][k]`
    pub fn beta(&self) -> Vec<Vec<Vec<u64>>> {
        let m = self.module_moduli.len();
        (0..m)
            .map(|i| {
                self.actions
                    .iter()
                    .map(|a| (0..m).map(|k| a.get(k, i)).collect())
                    .collect()
            })
            .collect()
    }
}

/// The `p`-primary part `R_p` of `R`, an ideal and a ring with identity
/// `1_p`; `R` is the direct sum of its primary parts.
#[derive(Clone, Debug)]
pub struct PrimeComponent {
    pub p: u64,
    pub ring: StructuredRing,
    /// parent generators that survive, with `R_p` generator `k` equal to
    /// `multipliers[k] * e_{gens[k]}`
    pub gens: Vec<usize>,
    pub multipliers: Vec<u64>,
    /// `1_p` in parent coordinates
    pub idempotent: Vec<u64>,
    /// integer `c` with `c * x = 1_p x` for every `x`
    crt: u64,
}

impl PrimeComponent {
    pub fn embed(&self, parent: &StructuredRing, y: &[u64]) -> Vec<u64> {
        let mut x = parent.zero();
        for (k, &g) in self.gens.iter().enumerate() {
            x[g] = (y[k] as u128 * self.multipliers[k] as u128 % parent.moduli()[g] as u128) as u64;
        }
        x
    }

    pub fn project(&self, parent: &StructuredRing, x: &[u64]) -> Vec<u64> {
        self.gens
            .iter()
            .enumerate()
            .map(|(k, &g)| {
                let n = parent.moduli()[g];
                let v = (x[g] as u128 * self.crt as u128 % n as u128) as u64;
                (v / self.multipliers[k]) % self.ring.moduli()[k]
            })
            .collect()
    }
}

fn p_part(n: u64, p: u64) -> u64 {
    let mut q = 1;
    let mut n = n;
    while n % p == 0 {
        q *= p;
        n /= p;
    }
    q
}

pub fn prime_components(r: &StructuredRing) -> Vec<PrimeComponent> {
    let exponent = r.moduli().iter().fold(1u64, |acc, &m| acc.lcm(&m));
    let mut primes = field::prime_factors(exponent);
    primes.sort_unstable();
    primes
        .into_iter()
        .map(|p| {
            let pp = p_part(exponent, p);
            let rest = exponent / pp;
            // c = 1 mod p^v, c = 0 mod rest
            let c = if rest == 1 {
                1
            } else {
                let inv = fp_inverse_mod(rest % pp, pp);
                (rest as u128 * inv as u128 % exponent as u128) as u64
            };
            let gens: Vec<usize> = (0..r.rank()).filter(|&i| r.moduli()[i] % p == 0).collect();
            let multipliers: Vec<u64> = gens.iter().map(|&i| r.moduli()[i] / p_part(r.moduli()[i], p)).collect();
            let sub_moduli: Vec<u64> = gens.iter().map(|&i| p_part(r.moduli()[i], p)).collect();
            let t = gens.len();
            let mut alpha = vec![0u64; t * t * t];
            for (a, &i) in gens.iter().enumerate() {
                for (b, &j) in gens.iter().enumerate() {
                    for (d, &k) in gens.iter().enumerate() {
                        let nk = r.moduli()[k] as u128;
                        let v = multipliers[a] as u128 * multipliers[b] as u128 % nk * r.alpha(i, j, k) as u128 % nk;
                        alpha[(a * t + b) * t + d] = ((v / multipliers[d] as u128) % sub_moduli[d] as u128) as u64;
                    }
                }
            }
            let idempotent = r.scale(r.one(), c);
            let one: Vec<u64> = gens
                .iter()
                .enumerate()
                .map(|(k, &g)| idempotent[g] / multipliers[k] % sub_moduli[k])
                .collect();
            let ring = StructuredRing::from_flat(sub_moduli, alpha, one).expect("primary part of a ring is a ring");
            PrimeComponent {
                p,
                ring,
                gens,
                multipliers,
                idempotent,
                crt: c,
            }
        })
        .collect()
}

fn fp_inverse_mod(a: u64, m: u64) -> u64 {
    let (g, x, _) = ext_gcd_i128(a as i128, m as i128);
    assert_eq!(g, 1, "not invertible");
    x.rem_euclid(m as i128) as u64
}

fn ext_gcd_i128(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd_i128(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Ideal given by additive generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    pub generators: Vec<Vec<u64>>,
}

impl Ideal {
    pub fn size(&self, r: &StructuredRing) -> u128 {
        r.span(&self.generators).size()
    }

    pub fn contains(&self, r: &StructuredRing, x: &[u64]) -> bool {
        r.span(&self.generators).contains(x)
    }

    /// Additive span of all products `x y`, `x` in `self`, `y` in `other`.
    pub fn product(&self, r: &StructuredRing, other: &Ideal) -> Ideal {
        let mut span = CoordSubgroup::new(r.moduli());
        for x in &self.generators {
            for y in &other.generators {
                span.insert(&r.mul(x, y));
            }
        }
        Ideal {
            generators: span.rows().into_iter().map(|(_, v, _)| v.to_vec()).collect(),
        }
    }

    pub fn is_zero(&self, r: &StructuredRing) -> bool {
        self.generators.iter().all(|g| r.is_zero(g))
    }

    /// Two-sided ideal check against ring generators.
    pub fn is_ideal(&self, r: &StructuredRing) -> bool {
        let span = r.span(&self.generators);
        self.generators.iter().all(|g| {
            (0..r.rank()).all(|i| {
                let e = r.basis(i);
                span.contains(&r.mul(g, &e)) && span.contains(&r.mul(&e, g))
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups;

    #[test]
    fn constructors_validate() {
        assert_eq!(StructuredRing::matrix_ring(2, 3).size(), 81);
        assert_eq!(StructuredRing::upper_triangular(3, 2).size(), 64);
        let f4 = FiniteField::new(2, vec![1, 1, 1]).unwrap();
        assert_eq!(StructuredRing::field(&f4).size(), 4);
        assert_eq!(StructuredRing::group_ring(3, &groups::cyclic(2)).size(), 9);
        // F_4 on 1, x, but with x declared as the identity
        let bad = StructuredRing::from_flat(vec![2, 2], vec![1, 0, 0, 1, 0, 1, 1, 1], vec![0, 1]);
        assert!(bad.is_err());
        // Z_4 with alpha = 2 has no identity
        assert!(StructuredRing::from_flat(vec![4], vec![2], vec![1]).is_err());
        // e_1 e_1 = e_2 with e_1 of order 2, e_2 of order 4 is not well defined
        assert!(StructuredRing::from_flat(vec![2, 4], vec![0, 1, 0, 0, 0, 0, 0, 0], vec![0, 0]).is_err());
    }

    fn units_by_trial(r: &StructuredRing) -> usize {
        let elems = r.elements(1 << 16).unwrap();
        elems
            .iter()
            .filter(|x| elems.iter().any(|y| r.mul(x, y) == r.one() && r.mul(y, x) == r.one()))
            .count()
    }

    #[test]
    fn prime_components_of_cyclic_rings() {
        let z6 = StructuredRing::cyclic(6);
        let comps = prime_components(&z6);
        assert_eq!(comps.iter().map(|c| c.ring.size()).collect::<Vec<_>>(), vec![2, 3]);

        let z12 = StructuredRing::cyclic(12);
        let comps = prime_components(&z12);
        assert_eq!(comps.iter().map(|c| c.ring.size()).collect::<Vec<_>>(), vec![4, 3]);
        let counts: Vec<usize> = comps.iter().map(|c| units_by_trial(&c.ring)).collect();
        assert_eq!(counts, vec![2, 2]);
        assert_eq!(counts.iter().product::<usize>(), units_by_trial(&z12));

        let z8 = StructuredRing::cyclic(8);
        assert_eq!(prime_components(&z8).len(), 1);
    }

    #[test]
    fn components_are_ideals_and_multiply() {
        let r = StructuredRing::upper_triangular(2, 6).direct_sum(&StructuredRing::cyclic(10));
        let comps = prime_components(&r);
        assert_eq!(comps.iter().map(|c| c.p).collect::<Vec<_>>(), vec![2, 3, 5]);
        assert_eq!(comps.iter().map(|c| c.ring.size()).product::<u128>(), r.size());
        let total = comps.iter().fold(r.zero(), |acc, c| r.add(&acc, &c.idempotent));
        assert_eq!(total, r.one());
        for c in &comps {
            for i in 0..c.ring.rank() {
                for j in 0..c.ring.rank() {
                    let (x, y) = (c.ring.basis(i), c.ring.basis(j));
                    let lhs = c.embed(&r, &c.ring.mul(&x, &y));
                    let rhs = r.mul(&c.embed(&r, &x), &c.embed(&r, &y));
                    assert_eq!(lhs, rhs);
                    assert_eq!(c.project(&r, &c.embed(&r, &x)), x);
                }
            }
        }
    }

    #[test]
    fn action_ring_validation() {
        let z4 = StructuredRing::cyclic(4);
        // Z_4 acting on Z_4 by multiplication
        assert!(ActionRing::new(z4.clone(), vec![4], &[vec![vec![1]]]).is_ok());
        // generator 1 must act as the identity
        assert!(ActionRing::new(z4, vec![4], &[vec![vec![3]]]).is_err());
        // Z_8[C_2] acting on Z_4 with the group element inverting
        let r = StructuredRing::group_ring(8, &groups::cyclic(2));
        let ok = ActionRing::new(r.clone(), vec![4], &[vec![vec![1], vec![3]]]);
        assert!(ok.is_ok());
        // an action of order 4 violates x^2 = 1
        let bad = ActionRing::new(r, vec![4, 4], &[vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![3, 0]]]);
        assert!(bad.is_err());
    }
}
