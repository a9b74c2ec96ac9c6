//! Endomorphisms of `A = Z_{n_1} + ... + Z_{n_t}` as integer matrices.
//!
//! Column `j` of a matrix is the image of the generator `a_j`; row `i` lives
//! in `Z_{n_i}`. A matrix is a homomorphism iff `n_j M_ij = 0 mod n_i`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{ActionRing, StructuredRing};
use crate::abelian::{decompose_lattice, mixed_radix_coords, mixed_radix_index, LatticeDecomposition};
use crate::permgrp::Perm;
use crate::zlinalg::{solve_mod, IntMatrix, Solve};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EndoMatrix {
    moduli: Vec<u64>,
    data: Vec<u64>,
}

impl EndoMatrix {
    pub fn from_data(moduli: &[u64], data: Vec<u64>) -> Self {
        let t = moduli.len();
        assert_eq!(data.len(), t * t, "matrix size");
        let data = data
            .into_iter()
            .enumerate()
            .map(|(idx, x)| x % moduli[idx / t])
            .collect();
        EndoMatrix {
            moduli: moduli.to_vec(),
            data,
        }
    }

    /// Matrix with the given column images.
    pub fn from_columns(moduli: &[u64], cols: &[Vec<u64>]) -> Self {
        let t = moduli.len();
        let mut data = vec![0u64; t * t];
        for (j, c) in cols.iter().enumerate() {
            for i in 0..t {
                data[i * t + j] = c[i];
            }
        }
        Self::from_data(moduli, data)
    }

    pub fn zero(moduli: &[u64]) -> Self {
        let t = moduli.len();
        Self::from_data(moduli, vec![0; t * t])
    }

    pub fn identity(moduli: &[u64]) -> Self {
        let t = moduli.len();
        let mut data = vec![0; t * t];
        for i in 0..t {
            data[i * t + i] = 1;
        }
        Self::from_data(moduli, data)
    }

    pub fn dim(&self) -> usize {
        self.moduli.len()
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.dim() + j]
    }

    /// Entries row-major; entry `(i, j)` lives in `Z_{n_i}`.
    pub fn entries(&self) -> &[u64] {
        &self.data
    }

    pub fn entry_moduli(&self) -> Vec<u64> {
        entry_moduli(&self.moduli)
    }

    pub fn is_homomorphism(&self) -> bool {
        let t = self.dim();
        (0..t).all(|i| (0..t).all(|j| self.get(i, j) as u128 * self.moduli[j] as u128 % self.moduli[i] as u128 == 0))
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        let t = self.dim();
        (0..t)
            .map(|i| {
                let n = self.moduli[i] as u128;
                ((0..t).map(|j| self.get(i, j) as u128 * v[j] as u128 % n).sum::<u128>() % n) as u64
            })
            .collect()
    }

    /// Apply `self`, then `other`.
    pub fn then(&self, other: &EndoMatrix) -> EndoMatrix {
        let t = self.dim();
        let mut data = vec![0u64; t * t];
        for i in 0..t {
            let n = self.moduli[i] as u128;
            for k in 0..t {
                let s: u128 = (0..t).map(|j| other.get(i, j) as u128 * self.get(j, k) as u128 % n).sum();
                data[i * t + k] = (s % n) as u64;
            }
        }
        EndoMatrix {
            moduli: self.moduli.clone(),
            data,
        }
    }

    pub fn add(&self, other: &EndoMatrix) -> EndoMatrix {
        let t = self.dim();
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .enumerate()
            .map(|(idx, (&a, &b))| (a + b) % self.moduli[idx / t])
            .collect();
        EndoMatrix {
            moduli: self.moduli.clone(),
            data,
        }
    }

    pub fn scale(&self, c: u64) -> EndoMatrix {
        let t = self.dim();
        let data = self
            .data
            .iter()
            .enumerate()
            .map(|(idx, &a)| (a as u128 * c as u128 % self.moduli[idx / t] as u128) as u64)
            .collect();
        EndoMatrix {
            moduli: self.moduli.clone(),
            data,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(&self.moduli)
    }

    /// Action on the mixed-radix points of `A`, when bijective.
    pub fn to_perm(&self) -> Option<Perm> {
        let size = self.moduli.iter().product::<u64>() as usize;
        let images: Vec<usize> = (0..size)
            .map(|i| mixed_radix_index(&self.apply(&mixed_radix_coords(i, &self.moduli)), &self.moduli))
            .collect();
        Perm::from_images(&images).ok()
    }
}

fn entry_moduli(moduli: &[u64]) -> Vec<u64> {
    let t = moduli.len();
    (0..t * t).map(|idx| moduli[idx / t]).collect()
}

/// The maps `f_{i,a}`: `a_i -> a`, other generators to zero, for every `a`
/// with `n_i a = 0`. They span `End(A)` additively.
pub fn end_ring_generators(moduli: &[u64]) -> Vec<EndoMatrix> {
    let t = moduli.len();
    let size = moduli.iter().product::<u64>() as usize;
    let mut out = Vec::new();
    for i in 0..t {
        for idx in 0..size {
            let a = mixed_radix_coords(idx, moduli);
            let killed = a
                .iter()
                .zip(moduli)
                .all(|(&x, &n)| x as u128 * moduli[i] as u128 % n as u128 == 0);
            if killed {
                let mut cols = vec![vec![0u64; t]; t];
                cols[i] = a;
                out.push(EndoMatrix::from_columns(moduli, &cols));
            }
        }
    }
    out
}

/// A subring of `End(A)` in invariant-factor coordinates, with the matrices
/// of its cyclic generators.
#[derive(Clone, Debug)]
pub struct Commutant {
    pub action: ActionRing,
    lattice: LatticeDecomposition,
}

impl Commutant {
    pub fn ring(&self) -> &StructuredRing {
        self.action.ring()
    }

    pub fn basis(&self) -> &[EndoMatrix] {
        self.action.actions()
    }

    pub fn express(&self, m: &EndoMatrix) -> Option<Vec<u64>> {
        self.lattice.express(m.entries())
    }

    pub fn element(&self, coords: &[u64]) -> EndoMatrix {
        self.action.action_matrix(coords)
    }
}

/// All endomorphisms `X` of `A` with `X G = G0 X` for every pair `(G, G0)`.
pub fn intertwiner_lattice(moduli: &[u64], pairs: &[(EndoMatrix, EndoMatrix)]) -> LatticeDecomposition {
    let t = moduli.len();
    let vars = t * t;
    let mut rows: Vec<(Vec<i64>, u64)> = Vec::new();
    for i in 0..t {
        for j in 0..t {
            let mut r = vec![0i64; vars];
            r[i * t + j] = moduli[j] as i64;
            rows.push((r, moduli[i]));
        }
    }
    for (g, g0) in pairs {
        for i in 0..t {
            for l in 0..t {
                // (X G - G0 X)_il
                let mut r = vec![0i64; vars];
                for j in 0..t {
                    r[i * t + j] += g.get(j, l) as i64;
                    r[j * t + l] -= g0.get(i, j) as i64;
                }
                if r.iter().any(|&x| x != 0) {
                    rows.push((r, moduli[i]));
                }
            }
        }
    }
    let mut a = IntMatrix::zeros(rows.len(), vars);
    for (ri, (r, _)) in rows.iter().enumerate() {
        for (c, &x) in r.iter().enumerate() {
            a[(ri, c)] = BigInt::from(x);
        }
    }
    let m: Vec<BigInt> = rows.iter().map(|(_, n)| BigInt::from(*n)).collect();
    let zeros = vec![BigInt::from(0); rows.len()];
    let emod = entry_moduli(moduli);
    let gens: Vec<Vec<u64>> = match solve_mod(&a, &zeros, &m) {
        Solve::Feasible(sol) => sol
            .nullspace
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&emod)
                    .map(|(x, &n)| x.mod_floor(&BigInt::from(n)).to_u64().expect("residue"))
                    .collect()
            })
            .collect(),
        Solve::Infeasible => unreachable!("homogeneous systems are feasible"),
    };
    decompose_lattice(&emod, &gens)
}

/// All endomorphisms of `A` commuting with every actor, as a ring acting on
/// `A`. Ring multiplication is composition: `x y` means `x` then `y`.
pub fn commutant_ring(moduli: &[u64], actors: &[EndoMatrix]) -> Commutant {
    let pairs: Vec<(EndoMatrix, EndoMatrix)> = actors.iter().map(|g| (g.clone(), g.clone())).collect();
    let lattice = intertwiner_lattice(moduli, &pairs);
    let basis: Vec<EndoMatrix> = lattice
        .basis()
        .iter()
        .map(|b| EndoMatrix::from_data(moduli, b.clone()))
        .collect();
    let r = basis.len();
    let mut alpha = vec![0u64; r * r * r];
    for a in 0..r {
        for b in 0..r {
            let prod = basis[a].then(&basis[b]);
            let c = lattice.express(prod.entries()).expect("commutant is closed under composition");
            alpha[(a * r + b) * r..(a * r + b + 1) * r].copy_from_slice(&c);
        }
    }
    let one = lattice
        .express(EndoMatrix::identity(moduli).entries())
        .expect("identity commutes");
    let ring = StructuredRing::from_flat(lattice.invariant_factors().to_vec(), alpha, one)
        .expect("commutant is a ring");
    let action = ActionRing::from_matrices(ring, moduli.to_vec(), basis).expect("commutant acts on A");
    Commutant { action, lattice }
}
