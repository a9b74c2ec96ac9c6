//! Integer matrices: Smith normal form and linear Diophantine systems.
//!
//! All arithmetic is exact (`BigInt`); intermediate entries of the Smith
//! reduction can grow well past the size of the inputs.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = x.into();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self[(r, c)].is_zero()))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(r) = (k + 1..n).find(|&r| !m[(r, k)].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap_rows(k, r);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
            }
            prev = m[(k, k)].clone();
        }
        sign * &m[(n - 1, n - 1)]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// `row[dst] += q * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = q * &self[(src, c)];
            self[(dst, c)] += v;
        }
    }

    /// `col[dst] += q * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = q * &self[(r, src)];
            self[(r, dst)] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -std::mem::take(&mut self[(r, c)]);
            self[(r, c)] = v;
        }
    }
}

/// `U * A * V = S` with `U`, `V` unimodular and `S` diagonal with
/// `d_1 | d_2 | ...`, all `d_i >= 0`. `V^-1` is tracked alongside `V`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl Smith {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows.min(self.s.cols))
            .map(|i| self.s[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|d| !d.is_zero()).count()
    }
}

/// Smith normal form. Pivots are the nonzero entries of least absolute value
/// in the active block (ties: lowest row, then lowest column).
pub fn smith_normal_form(a: &IntMatrix) -> Smith {
    let (m, n) = (a.rows, a.cols);
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut v_inv = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for r in t..m {
                for c in t..n {
                    let x = &s[(r, c)];
                    if x.is_zero() {
                        continue;
                    }
                    if best.map_or(true, |(br, bc)| x.abs() < s[(br, bc)].abs()) {
                        best = Some((r, c));
                    }
                }
            }
            let Some((pr, pc)) = best else {
                // active block is zero
                return Smith { s, u, v, v_inv };
            };
            s.swap_rows(t, pr);
            u.swap_rows(t, pr);
            s.swap_cols(t, pc);
            v.swap_cols(t, pc);
            v_inv.swap_rows(t, pc);

            let pivot = s[(t, t)].clone();
            let mut dirty = false;
            for r in t + 1..m {
                if s[(r, t)].is_zero() {
                    continue;
                }
                let q = -s[(r, t)].div_floor(&pivot);
                s.add_row(r, t, &q);
                u.add_row(r, t, &q);
                dirty |= !s[(r, t)].is_zero();
            }
            for c in t + 1..n {
                if s[(t, c)].is_zero() {
                    continue;
                }
                let q = -s[(t, c)].div_floor(&pivot);
                s.add_col(c, t, &q);
                v.add_col(c, t, &q);
                v_inv.add_row(t, c, &-&q);
                dirty |= !s[(t, c)].is_zero();
            }
            if dirty {
                continue;
            }
            // row and column cleared; enforce divisibility of the rest
            let bad = (t + 1..m)
                .flat_map(|r| (t + 1..n).map(move |c| (r, c)))
                .find(|&(r, c)| !s[(r, c)].is_multiple_of(&pivot));
            match bad {
                Some((r, _)) => {
                    let one = BigInt::one();
                    s.add_row(t, r, &one);
                    u.add_row(t, r, &one);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    Smith { s, u, v, v_inv }
}

/// Integer solution set `particular + span(nullspace)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiophantineSolution {
    pub particular: Vec<BigInt>,
    pub nullspace: Vec<Vec<BigInt>>,
}

impl DiophantineSolution {
    pub fn particular_i64(&self) -> Vec<i64> {
        self.particular.iter().map(|x| x.to_i64().expect("fits i64")).collect()
    }

    pub fn nullspace_i64(&self) -> Vec<Vec<i64>> {
        self.nullspace
            .iter()
            .map(|v| v.iter().map(|x| x.to_i64().expect("fits i64")).collect())
            .collect()
    }
}

/// Outcome of a linear Diophantine solve; infeasibility is a value, not a fault.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solve {
    Feasible(DiophantineSolution),
    Infeasible,
}

impl Solve {
    pub fn feasible(self) -> Option<DiophantineSolution> {
        match self {
            Solve::Feasible(s) => Some(s),
            Solve::Infeasible => None,
        }
    }
}

/// All integer solutions of `A x = b`.
pub fn solve(a: &IntMatrix, b: &[BigInt]) -> Solve {
    assert_eq!(b.len(), a.rows, "right-hand side length");
    let smith = smith_normal_form(a);
    let ub = smith.u.mul_vec(b);
    let rank = smith.rank();
    let mut z = vec![BigInt::zero(); a.cols];
    for i in 0..a.rows {
        if i < rank {
            let d = &smith.s[(i, i)];
            if !ub[i].is_multiple_of(d) {
                return Solve::Infeasible;
            }
            z[i] = &ub[i] / d;
        } else if !ub[i].is_zero() {
            return Solve::Infeasible;
        }
    }
    let particular = smith.v.mul_vec(&z);
    let nullspace: Vec<Vec<BigInt>> = (rank..a.cols).map(|c| smith.v.column(c)).collect();
    Solve::Feasible(canonicalize(particular, nullspace))
}

/// Solutions of `A x ≡ b` with one modulus per row, via slack columns.
pub fn solve_mod(a: &IntMatrix, b: &[BigInt], moduli: &[BigInt]) -> Solve {
    assert_eq!(moduli.len(), a.rows, "one modulus per row");
    assert!(moduli.iter().all(|m| m.is_positive()), "moduli must be positive");
    let n = a.cols;
    let mut ext = IntMatrix::zeros(a.rows, n + a.rows);
    for r in 0..a.rows {
        for c in 0..n {
            ext[(r, c)] = a[(r, c)].clone();
        }
        ext[(r, n + r)] = moduli[r].clone();
    }
    match solve(&ext, b) {
        Solve::Infeasible => Solve::Infeasible,
        Solve::Feasible(sol) => {
            let particular = sol.particular[..n].to_vec();
            let nullspace = sol.nullspace.iter().map(|v| v[..n].to_vec()).collect();
            Solve::Feasible(canonicalize(particular, nullspace))
        }
    }
}

/// Reduces a lattice generating set to a basis in echelon form with pivots
/// taken from the last column backwards, reduces the particular solution
/// against it, and normalizes basis signs (first nonzero entry positive).
fn canonicalize(mut particular: Vec<BigInt>, gens: Vec<Vec<BigInt>>) -> DiophantineSolution {
    let basis = lattice_basis(gens);
    for row in &basis {
        let pc = last_nonzero(row).expect("basis rows are nonzero");
        let q = particular[pc].div_floor(&row[pc]);
        if !q.is_zero() {
            for (x, r) in particular.iter_mut().zip(row) {
                *x -= &q * r;
            }
        }
    }
    let nullspace = basis
        .into_iter()
        .map(|mut row| {
            if row.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                row.iter_mut().for_each(|x| *x = -std::mem::take(x));
            }
            row
        })
        .collect();
    DiophantineSolution {
        particular,
        nullspace,
    }
}

fn last_nonzero(v: &[BigInt]) -> Option<usize> {
    v.iter().rposition(|x| !x.is_zero())
}

/// Echelon basis of the lattice spanned by `gens`; rows are ordered by
/// decreasing pivot column (the last nonzero entry), pivots positive, and
/// entries at other rows' pivot columns reduced into `[0, pivot)`.
pub fn lattice_basis(gens: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let mut rest: Vec<Vec<BigInt>> = gens.into_iter().filter(|v| v.iter().any(|x| !x.is_zero())).collect();
    let Some(width) = rest.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    for col in (0..width).rev() {
        // rows whose last nonzero entry sits in this column
        let (mut active, others): (Vec<_>, Vec<_>) =
            rest.into_iter().partition(|v| last_nonzero(v) == Some(col));
        rest = others;
        while active.len() > 1 {
            let (mi, _) = active
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| a[col].abs().cmp(&b[col].abs()))
                .expect("nonempty");
            let pivot_row = active.swap_remove(mi);
            let mut next = vec![pivot_row.clone()];
            for mut v in active {
                let q = v[col].div_floor(&pivot_row[col]);
                for (x, p) in v.iter_mut().zip(&pivot_row) {
                    *x -= &q * p;
                }
                match last_nonzero(&v) {
                    Some(c) if c == col => next.push(v),
                    Some(_) => rest.push(v),
                    None => {}
                }
            }
            active = next;
        }
        if let Some(mut p) = active.pop() {
            if p[col].is_negative() {
                p.iter_mut().for_each(|x| *x = -std::mem::take(x));
            }
            basis.push(p);
        }
    }
    // reduce entries above later pivots
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let pc = last_nonzero(&basis[j]).expect("nonzero");
            let q = basis[i][pc].div_floor(&basis[j][pc]);
            if !q.is_zero() {
                let pj = basis[j].clone();
                for (x, p) in basis[i].iter_mut().zip(&pj) {
                    *x -= &q * p;
                }
            }
        }
    }
    basis
}

pub fn to_bigints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        to_bigints(v)
    }

    /// gcd of all k x k minors, the k-th determinantal divisor.
    fn determinantal_divisor(a: &IntMatrix, k: usize) -> BigInt {
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if n < k {
                return vec![];
            }
            let mut out = subsets(n - 1, k);
            for mut s in subsets(n - 1, k - 1) {
                s.push(n - 1);
                out.push(s);
            }
            out
        }
        let mut g = BigInt::zero();
        for rs in subsets(a.rows(), k) {
            for cs in subsets(a.cols(), k) {
                let mut m = IntMatrix::zeros(k, k);
                for (i, &r) in rs.iter().enumerate() {
                    for (j, &c) in cs.iter().enumerate() {
                        m[(i, j)] = a[(r, c)].clone();
                    }
                }
                g = g.gcd(&m.determinant());
            }
        }
        g
    }

    fn check_smith(a: &IntMatrix) -> Smith {
        let sm = smith_normal_form(a);
        assert_eq!(sm.u.mul(a).mul(&sm.v), sm.s);
        assert!(sm.s.is_diagonal());
        assert_eq!(sm.u.determinant().abs(), BigInt::one());
        assert_eq!(sm.v.determinant().abs(), BigInt::one());
        assert_eq!(sm.v.mul(&sm.v_inv), IntMatrix::identity(a.cols()));
        let d = sm.diagonal();
        for w in d.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        sm
    }

    #[test]
    fn smith_examples() {
        let sm = check_smith(&IntMatrix::from_rows(&[vec![2i64, 0], vec![0, 3]]));
        assert_eq!(sm.diagonal(), big(&[1, 6]));

        let z = IntMatrix::zeros(2, 3);
        let sm = check_smith(&z);
        assert_eq!(sm.s, z);
        assert_eq!(sm.u, IntMatrix::identity(2));
        assert_eq!(sm.v, IntMatrix::identity(3));

        let a = IntMatrix::from_rows(&[vec![2i64, 4], vec![6, 8]]);
        let sm = check_smith(&a);
        // determinantal divisors: d1 = gcd(entries) = 2, d1 d2 = |det| = 8
        let d1 = determinantal_divisor(&a, 1);
        let d12 = determinantal_divisor(&a, 2);
        assert_eq!(d1, BigInt::from(2));
        assert_eq!(d12, BigInt::from(8));
        assert_eq!(sm.diagonal(), vec![d1.clone(), d12 / d1]);
    }

    #[test]
    fn solve_examples() {
        let s = solve(&IntMatrix::from_rows(&[vec![2i64]]), &big(&[4])).feasible().unwrap();
        assert_eq!(s.particular, big(&[2]));
        assert!(s.nullspace.is_empty());

        let s = solve(&IntMatrix::from_rows(&[vec![1i64, 1]]), &big(&[1])).feasible().unwrap();
        assert_eq!(s.particular, big(&[1, 0]));
        assert_eq!(s.nullspace, vec![big(&[1, -1])]);

        assert_eq!(solve(&IntMatrix::from_rows(&[vec![2i64]]), &big(&[3])), Solve::Infeasible);
    }

    #[test]
    fn solve_mod_examples() {
        let one = IntMatrix::from_rows(&[vec![1i64]]);
        let s = solve_mod(&one, &big(&[1]), &big(&[2])).feasible().unwrap();
        assert_eq!(s.particular, big(&[1]));
        assert_eq!(s.nullspace, vec![big(&[2])]);

        let two = IntMatrix::from_rows(&[vec![2i64]]);
        assert_eq!(solve_mod(&two, &big(&[1]), &big(&[4])), Solve::Infeasible);

        let three = IntMatrix::from_rows(&[vec![3i64]]);
        let s = solve_mod(&three, &big(&[0]), &big(&[6])).feasible().unwrap();
        assert_eq!(s.particular, big(&[0]));
        assert_eq!(s.nullspace, vec![big(&[2])]);
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-9i64..=9, c), r)
        })
    }

    proptest! {
        #[test]
        fn smith_invariants(rows in small_matrix()) {
            check_smith(&IntMatrix::from_rows(&rows));
        }

        #[test]
        fn solutions_reproduce_rhs(rows in small_matrix(), seed in proptest::collection::vec(-3i64..=3, 6)) {
            let a = IntMatrix::from_rows(&rows);
            let x: Vec<BigInt> = big(&seed[..a.cols()]);
            let b = a.mul_vec(&x);
            let sol = solve(&a, &b).feasible().expect("constructed to be feasible");
            prop_assert_eq!(a.mul_vec(&sol.particular), b.clone());
            for v in &sol.nullspace {
                prop_assert!(a.mul_vec(v).iter().all(|e| e.is_zero()));
                let shifted: Vec<BigInt> = sol.particular.iter().zip(v).map(|(p, q)| p + q).collect();
                prop_assert_eq!(a.mul_vec(&shifted), b.clone());
            }
            // nullspace rank = cols - rank
            let rank = smith_normal_form(&a).rank();
            prop_assert_eq!(sol.nullspace.len(), a.cols() - rank);
        }
    }

    #[test]
    fn solve_mod_matches_brute_force() {
        // systems over small moduli; enumerate residues modulo the lcm
        let cases: Vec<(Vec<Vec<i64>>, Vec<i64>, Vec<i64>)> = vec![
            (vec![vec![2, 3], vec![1, 1]], vec![1, 0], vec![4, 3]),
            (vec![vec![2, 4]], vec![2], vec![6]),
            (vec![vec![3, 0], vec![0, 2]], vec![0, 0], vec![6, 4]),
            (vec![vec![1, 2], vec![2, 4]], vec![1, 3], vec![5, 5]),
            (vec![vec![6, 9]], vec![3], vec![12]),
        ];
        for (rows, b, m) in cases {
            let a = IntMatrix::from_rows(&rows);
            let l = m.iter().fold(1i64, |acc, &x| num_integer::lcm(acc, x));
            let mut brute = std::collections::BTreeSet::new();
            for x0 in 0..l {
                for x1 in 0..l {
                    let ok = rows.iter().zip(&b).zip(&m).all(|((r, &bi), &mi)| {
                        (r[0] * x0 + r[1] * x1 - bi).rem_euclid(mi) == 0
                    });
                    if ok {
                        brute.insert((x0, x1));
                    }
                }
            }
            let sol = solve_mod(&a, &big(&b), &big(&m));
            let mut lattice = std::collections::BTreeSet::new();
            if let Some(sol) = sol.feasible() {
                let p = sol.particular_i64();
                let ns = sol.nullspace_i64();
                // enumerate p + sum c_i v_i with bounded coefficients, reduced mod l
                let range: Vec<i64> = (-2 * l..=2 * l).collect();
                let mut combos: Vec<(i64, i64)> = vec![(p[0], p[1])];
                for v in &ns {
                    let mut next = Vec::new();
                    for &(a0, a1) in &combos {
                        for &c in &range {
                            next.push((a0 + c * v[0], a1 + c * v[1]));
                        }
                    }
                    next.sort_unstable();
                    next.dedup_by_key(|&mut (a, b)| (a.rem_euclid(l), b.rem_euclid(l)));
                    combos = next;
                }
                for (a0, a1) in combos {
                    lattice.insert((a0.rem_euclid(l), a1.rem_euclid(l)));
                }
            }
            assert_eq!(lattice, brute, "system {rows:?} = {b:?} mod {m:?}");
        }
    }
}
