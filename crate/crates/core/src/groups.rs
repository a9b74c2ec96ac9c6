//! Constructors for standard small groups, used by tests, benches and the CLI
//! fixture generator.

use std::collections::HashMap;
use std::hash::Hash;

use crate::cayley::{quotient, GroupTable, Subgroup};

fn table(n: usize, mul: impl Fn(usize, usize) -> usize) -> GroupTable {
    GroupTable::from_fn(n, mul).expect("constructor produced a group")
}

/// Closure of `gens` under `mul`, indexed in breadth-first discovery order
/// with the identity at index 0.
pub fn from_generators<T: Clone + Eq + Hash>(
    identity: T,
    gens: &[T],
    mul: impl Fn(&T, &T) -> T,
) -> GroupTable {
    let mut elems = vec![identity.clone()];
    let mut index: HashMap<T, usize> = HashMap::from([(identity, 0)]);
    let mut i = 0;
    while i < elems.len() {
        for s in gens {
            let y = mul(&elems[i], s);
            if !index.contains_key(&y) {
                index.insert(y.clone(), elems.len());
                elems.push(y);
            }
        }
        i += 1;
    }
    let n = elems.len();
    let prod: Vec<usize> = (0..n * n)
        .map(|k| index[&mul(&elems[k / n], &elems[k % n])])
        .collect();
    table(n, |x, y| prod[x * n + y])
}

/// Group generated by permutations of `0..degree` (composition: apply left
/// factor first).
pub fn from_permutations(degree: usize, gens: &[Vec<usize>]) -> GroupTable {
    let id: Vec<usize> = (0..degree).collect();
    from_generators(id, gens, |a, b| a.iter().map(|&x| b[x]).collect())
}

pub fn cyclic(n: usize) -> GroupTable {
    table(n, |x, y| (x + y) % n)
}

/// `G x H` with `(x, y)` stored at index `x * |H| + y`.
pub fn direct_product(g: &GroupTable, h: &GroupTable) -> GroupTable {
    let m = h.order();
    table(g.order() * m, |a, b| {
        g.mul(a / m, b / m) * m + h.mul(a % m, b % m)
    })
}

/// Direct product of cyclic groups of the given orders.
pub fn abelian(orders: &[usize]) -> GroupTable {
    orders
        .iter()
        .fold(cyclic(1), |acc, &n| direct_product(&acc, &cyclic(n)))
}

/// Split metacyclic group `Z_n ⋊ Z_m` with `b a b^-1 = a^r`; `a^i b^j` is
/// stored at index `j * n + i`.
pub fn metacyclic(n: usize, m: usize, r: usize) -> GroupTable {
    let rpow: Vec<usize> = (0..m)
        .scan(1usize, |acc, _| {
            let v = *acc;
            *acc = *acc * r % n;
            Some(v)
        })
        .collect();
    table(n * m, |x, y| {
        let (i, j) = (x % n, x / n);
        let (k, l) = (y % n, y / n);
        ((i + k * rpow[j]) % n) + ((j + l) % m) * n
    })
}

/// Dihedral group of order `2n`; rotation `r` is index 1, reflection `s` is
/// index `n`.
pub fn dihedral(n: usize) -> GroupTable {
    metacyclic(n, 2, n - 1)
}

/// Dicyclic group of order `4m`: `<a, x | a^{2m}, x^2 = a^m, x^-1 a x = a^-1>`.
/// `a^i x^j` is stored at index `j * 2m + i`.
pub fn dicyclic(m: usize) -> GroupTable {
    let n = 2 * m;
    table(2 * n, |x, y| {
        let (i, j) = (x % n, x / n);
        let (k, l) = (y % n, y / n);
        if j == 0 {
            (i + k) % n + l * n
        } else {
            let base = (i + n - k) % n;
            if l == 0 {
                base + n
            } else {
                (base + m) % n
            }
        }
    })
}

/// Generalized quaternion group of order `n` (a power of two, `n >= 8`).
pub fn quaternion(n: usize) -> GroupTable {
    dicyclic(n / 4)
}

pub fn symmetric(n: usize) -> GroupTable {
    if n <= 1 {
        return cyclic(1);
    }
    let transposition: Vec<usize> = (0..n).map(|i| match i { 0 => 1, 1 => 0, _ => i }).collect();
    let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    from_permutations(n, &[transposition, cycle])
}

pub fn alternating(n: usize) -> GroupTable {
    if n <= 2 {
        return cyclic(1);
    }
    let gens: Vec<Vec<usize>> = (2..n)
        .map(|k| {
            (0..n)
                .map(|i| match i {
                    0 => 1,
                    1 => k,
                    _ if i == k => 0,
                    _ => i,
                })
                .collect()
        })
        .collect();
    from_permutations(n, &gens)
}

/// `N ⋊ H` where `action(h, x)` is the automorphism of `N` attached to `h`.
/// `(x, h)` is stored at index `h * |N| + x`.
pub fn semidirect(
    normal: &GroupTable,
    top: &GroupTable,
    action: impl Fn(usize, usize) -> usize,
) -> GroupTable {
    let m = normal.order();
    table(m * top.order(), |a, b| {
        let (x1, h1) = (a % m, a / m);
        let (x2, h2) = (b % m, b / m);
        normal.mul(x1, action(h1, x2)) + top.mul(h1, h2) * m
    })
}

/// Central product `Z4 ∘ D4` (the Pauli group).
pub fn pauli() -> GroupTable {
    let z4 = cyclic(4);
    let d4 = dihedral(4);
    let g = direct_product(&z4, &d4);
    // (2, r^2) where r^2 is index 2 in D4
    let z = 2 * 8 + 2;
    let n = Subgroup::from_elements(&g, &[0, z]).expect("central subgroup");
    quotient(&g, &n).expect("normal").group
}

/// `(Z4 x Z2) ⋊ Z2` with `c a c = ab`, `c b c = b`.
pub fn z4z2_semidirect_z2() -> GroupTable {
    let n = abelian(&[4, 2]);
    let top = cyclic(2);
    semidirect(&n, &top, |h, x| {
        if h == 0 {
            x
        } else {
            let (i, j) = (x / 2, x % 2);
            i * 2 + (j + i) % 2
        }
    })
}

/// All 42 groups of order at most 16, each up to isomorphism exactly once.
pub fn small_groups() -> Vec<(&'static str, GroupTable)> {
    vec![
        ("Z1", cyclic(1)),
        ("Z2", cyclic(2)),
        ("Z3", cyclic(3)),
        ("Z4", cyclic(4)),
        ("Z2xZ2", abelian(&[2, 2])),
        ("Z5", cyclic(5)),
        ("Z6", cyclic(6)),
        ("S3", symmetric(3)),
        ("Z7", cyclic(7)),
        ("Z8", cyclic(8)),
        ("Z2xZ4", abelian(&[2, 4])),
        ("Z2^3", abelian(&[2, 2, 2])),
        ("D4", dihedral(4)),
        ("Q8", quaternion(8)),
        ("Z9", cyclic(9)),
        ("Z3xZ3", abelian(&[3, 3])),
        ("Z10", cyclic(10)),
        ("D5", dihedral(5)),
        ("Z11", cyclic(11)),
        ("Z12", cyclic(12)),
        ("Z2xZ6", abelian(&[2, 6])),
        ("D6", dihedral(6)),
        ("Dic3", dicyclic(3)),
        ("A4", alternating(4)),
        ("Z13", cyclic(13)),
        ("Z14", cyclic(14)),
        ("D7", dihedral(7)),
        ("Z15", cyclic(15)),
        ("Z16", cyclic(16)),
        ("Z4xZ4", abelian(&[4, 4])),
        ("Z2xZ8", abelian(&[2, 8])),
        ("Z2^2xZ4", abelian(&[2, 2, 4])),
        ("Z2^4", abelian(&[2, 2, 2, 2])),
        ("D8", dihedral(8)),
        ("Q16", quaternion(16)),
        ("SD16", metacyclic(8, 2, 3)),
        ("M16", metacyclic(8, 2, 5)),
        ("Z4:Z4", metacyclic(4, 4, 3)),
        ("(Z4xZ2):Z2", z4z2_semidirect_z2()),
        ("Z2xD4", direct_product(&cyclic(2), &dihedral(4))),
        ("Z2xQ8", direct_product(&cyclic(2), &quaternion(8))),
        ("Pauli", pauli()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(symmetric(4).order(), 24);
        assert_eq!(alternating(4).order(), 12);
        assert_eq!(dicyclic(3).order(), 12);
        assert_eq!(pauli().order(), 16);
        assert_eq!(z4z2_semidirect_z2().order(), 16);
        let q8 = quaternion(8);
        // unique involution
        assert_eq!((0..8).filter(|&x| q8.element_order(x) == 2).count(), 1);
        let d4 = dihedral(4);
        assert_eq!((0..8).filter(|&x| d4.element_order(x) == 2).count(), 5);
    }

    #[test]
    fn corpus_has_42_groups() {
        let c = small_groups();
        assert_eq!(c.len(), 42);
        assert_eq!(c.iter().filter(|(_, g)| g.order() == 16).count(), 14);
    }
}
