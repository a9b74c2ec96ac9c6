//! One check per acceptance criterion. Each prints a PASS or FAIL line; the
//! test fails if any criterion fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use extiso_cli::ringfile::RingFile;
use extiso_core::abelian::mixed_radix_coords;
use extiso_core::cayley::subgroup_generated;
use extiso_core::extiso::{aut0_generators, extend_quotient_isomorphism};
use extiso_core::finring::{
    commutant_ring, jacobson_radical, prime_components, unipotent_generators, unit_group, wedderburn, EndoMatrix,
    FqMatrix, StructuredRing,
};
use extiso_core::groups::{self, small_groups};
use extiso_core::modiso::{intertwines, is_automorphism, module_isomorphism};
use extiso_core::oracle::{all_isomorphisms, automorphism_count, unit_count_by_trial};
use extiso_core::tower::{automorphism_group, isomorphism_test, least_depth, IsomorphismOutcome};
use extiso_core::zlinalg::{smith_normal_form, IntMatrix};
use extiso_core::{quotient, ActionRing, GroupHom, GroupTable, Perm, StabChainGroup};

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn relabel(g: &GroupTable, seed: u64) -> GroupTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pi: Vec<usize> = (0..g.order()).collect();
    pi.shuffle(&mut rng);
    let mut inv = vec![0; pi.len()];
    for (x, &y) in pi.iter().enumerate() {
        inv[y] = x;
    }
    GroupTable::from_fn(g.order(), |x, y| pi[g.mul(inv[x], inv[y])]).unwrap()
}

/// The bundled groups of order at most 16 plus a relabeled copy of each.
fn corpus() -> Vec<(String, GroupTable)> {
    let mut out: Vec<(String, GroupTable)> = small_groups().into_iter().map(|(n, g)| (n.to_string(), g)).collect();
    let copies: Vec<(String, GroupTable)> = out
        .iter()
        .enumerate()
        .map(|(i, (n, g))| (format!("{n}'"), relabel(g, i as u64)))
        .collect();
    out.extend(copies);
    out
}

fn images(maps: &[GroupHom]) -> BTreeSet<Vec<usize>> {
    maps.iter().map(|f| f.images().to_vec()).collect()
}

/// Criteria 1 and 2 share the pair sweep.
struct Sweep {
    pairs: usize,
    iso_pairs: usize,
    decision_mismatches: Vec<String>,
    coset_mismatches: Vec<String>,
    elapsed: Duration,
}

fn sweep() -> Sweep {
    let groups = corpus();
    let start = Instant::now();
    let mut s = Sweep {
        pairs: 0,
        iso_pairs: 0,
        decision_mismatches: Vec::new(),
        coset_mismatches: Vec::new(),
        elapsed: Duration::ZERO,
    };
    for (name, g) in &groups {
        let k = least_depth(g, 2).expect("a tower of length at most 2");
        for (name0, g0) in &groups {
            s.pairs += 1;
            let brute = all_isomorphisms(g, g0, 16).unwrap();
            let outcome = isomorphism_test(g, g0, k).unwrap();
            let got = match &outcome {
                IsomorphismOutcome::Isomorphic(c) => Some(c),
                IsomorphismOutcome::NotIsomorphic => None,
            };
            if got.is_some() != !brute.is_empty() {
                s.decision_mismatches.push(format!("{name} vs {name0}"));
                continue;
            }
            if let Some(c) = got {
                s.iso_pairs += 1;
                let aut = automorphism_count(g, 16).unwrap() as u128;
                if images(&c.elements()) != images(&brute) || c.size() != aut {
                    s.coset_mismatches.push(format!("{name} vs {name0}"));
                }
            }
        }
    }
    s.elapsed = start.elapsed();
    s
}

fn criterion_1(s: &Sweep) -> Check {
    ensure(s.decision_mismatches.is_empty(), || format!("disagreements: {:?}", s.decision_mismatches))?;
    ensure(s.elapsed < Duration::from_secs(300), || format!("took {:?}", s.elapsed))?;
    println!("    {} pairs, {} isomorphic, {:.1?}", s.pairs, s.iso_pairs, s.elapsed);
    Ok(())
}

fn criterion_2(s: &Sweep) -> Check {
    ensure(s.iso_pairs > 0, || "no isomorphic pairs".into())?;
    ensure(s.coset_mismatches.is_empty(), || format!("coset differs: {:?}", s.coset_mismatches))
}

fn criterion_3() -> Check {
    let cases = [
        ("Z2^3", groups::abelian(&[2, 2, 2]), 168u128),
        ("Q8", groups::quaternion(8), 24),
        ("D4", groups::dihedral(4), 8),
        ("S3", groups::symmetric(3), 6),
        ("Z12", groups::cyclic(12), 4),
    ];
    for (name, g, expected) in cases {
        let oracle = automorphism_count(&g, 16).unwrap() as u128;
        ensure(oracle == expected, || format!("oracle gives {oracle} for {name}"))?;
        let k = least_depth(&g, 2).unwrap();
        let got = automorphism_group(&g, k).unwrap().order();
        ensure(got == expected, || format!("Aut({name}) = {got}, expected {expected}"))?;
    }
    Ok(())
}

/// Number of bijective endomorphisms of `Z_{m_1} + ... + Z_{m_t}`.
fn automorphisms_of_abelian(moduli: &[u64]) -> u128 {
    let t = moduli.len();
    let emod: Vec<u64> = (0..t * t).map(|idx| moduli[idx / t]).collect();
    let total: usize = emod.iter().product::<u64>() as usize;
    (0..total)
        .map(|i| EndoMatrix::from_data(moduli, mixed_radix_coords(i, &emod)))
        .filter(|m| m.is_homomorphism() && m.to_perm().is_some())
        .count() as u128
}

fn euler_phi(n: u64) -> u128 {
    (1..=n).filter(|&k| k.gcd(&n) == 1).count() as u128
}

fn criterion_4() -> Check {
    for n in [5u64, 8, 12, 16] {
        let c = commutant_ring(&[n], &[]);
        let got = unit_group(c.ring(), Some(&c.action)).map_err(|e| e.to_string())?.order();
        ensure(got == euler_phi(n), || format!("End(Z{n}): {got}"))?;
    }
    for (moduli, expected) in [(vec![2u64, 2], 6u128), (vec![2, 4], 8)] {
        let brute = automorphisms_of_abelian(&moduli);
        ensure(brute == expected, || format!("oracle for {moduli:?} gives {brute}"))?;
        let c = commutant_ring(&moduli, &[]);
        let got = unit_group(c.ring(), Some(&c.action)).map_err(|e| e.to_string())?.order();
        ensure(got == expected, || format!("End({moduli:?}): {got}"))?;
    }
    let mut checked = 0;
    for entry in std::fs::read_dir(fixtures()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("ring") {
            continue;
        }
        let file = RingFile::parse(&std::fs::read_to_string(&path).unwrap()).map_err(|e| e.to_string())?;
        let r = file.ring().map_err(|e| e.to_string())?;
        if r.size() > 4096 {
            continue;
        }
        let action = file.action(&r).map_err(|e| e.to_string())?;
        let got = unit_group(&r, action.as_ref()).map_err(|e| e.to_string())?.order();
        let brute = unit_count_by_trial(&r, 4096).map_err(|e| e.to_string())?;
        ensure(got == brute, || format!("{}: chain {got}, trial {brute}", path.display()))?;
        checked += 1;
    }
    println!("    {checked} ring fixtures");
    ensure(checked >= 10, || format!("only {checked} fixtures"))
}

/// Units as permutations of `R` by left multiplication.
fn left_regular(r: &StructuredRing, units: &[Vec<u64>]) -> StabChainGroup {
    let n = r.size() as usize;
    let perms: Vec<Perm> = units
        .iter()
        .map(|u| Perm::from_images(&(0..n).map(|i| r.index_of(&r.mul(u, &r.element_at(i)))).collect::<Vec<_>>()).unwrap())
        .collect();
    StabChainGroup::build(n, &perms).unwrap()
}

fn criterion_5() -> Check {
    let mut rings: Vec<(String, StructuredRing)> = Vec::new();
    for p in [2u64, 3] {
        for k in 1..=4 {
            rings.push((format!("Z{}", p.pow(k)), StructuredRing::cyclic(p.pow(k))));
        }
    }
    rings.push(("UT3(F2)".into(), StructuredRing::upper_triangular(3, 2)));
    rings.push(("UT2(Z4)".into(), StructuredRing::upper_triangular(2, 4)));
    rings.push(("UT3(F3)".into(), StructuredRing::upper_triangular(3, 3)));
    for (name, r) in rings {
        let j = jacobson_radical(&r).map_err(|e| e.to_string())?;
        let gens = unipotent_generators(&r, &j).map_err(|e| e.to_string())?;
        let got = left_regular(&r, &gens).order();
        let size = j.size(&r);
        ensure(got == size, || format!("{name}: <1+J> = {got}, |J| = {size}"))?;
    }
    Ok(())
}

fn matrix_units_hold(s: &StructuredRing, iso: &extiso_core::finring::MatrixRingIso) -> bool {
    let n = iso.n;
    let e = |i: usize, j: usize| iso.from_matrix(&FqMatrix::unit(&iso.field, n, i, j));
    let units: Vec<Vec<Vec<u64>>> = (0..n).map(|i| (0..n).map(|j| e(i, j)).collect()).collect();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let prod = s.mul(&units[i][j], &units[k][l]);
                    let expected = if j == k { units[i][l].clone() } else { s.zero() };
                    if prod != expected {
                        return false;
                    }
                }
            }
        }
    }
    let sum = (0..n).fold(s.zero(), |acc, i| s.add(&acc, &units[i][i]));
    sum == iso.idempotent
}

fn criterion_6() -> Check {
    let f4 = extiso_core::finring::FiniteField::new(2, vec![1, 1, 1]).unwrap();
    let cases: Vec<(&str, StructuredRing, Vec<(usize, u64)>)> = vec![
        ("F2", StructuredRing::cyclic(2), vec![(1, 2)]),
        ("F4", StructuredRing::field(&f4), vec![(1, 4)]),
        ("F2+F3", StructuredRing::cyclic(6), vec![(1, 2), (1, 3)]),
        ("M2(F2)", StructuredRing::matrix_ring(2, 2), vec![(2, 2)]),
        ("M2(F3)", StructuredRing::matrix_ring(2, 3), vec![(2, 3)]),
    ];
    for (name, r, expected) in cases {
        let mut found = Vec::new();
        for comp in prime_components(&r) {
            for iso in wedderburn(&comp.ring).map_err(|e| e.to_string())? {
                ensure(matrix_units_hold(&comp.ring, &iso), || format!("{name}: matrix units fail"))?;
                found.push((iso.n, iso.q()));
            }
        }
        found.sort_unstable();
        ensure(found == expected, || format!("{name}: {found:?}"))?;
    }
    Ok(())
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..1000 {
        let (m, n) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let rows: Vec<Vec<i64>> = (0..m).map(|_| (0..n).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let a = IntMatrix::from_rows(&rows);
        let sm = smith_normal_form(&a);
        ensure(sm.u.mul(&a).mul(&sm.v) == sm.s, || format!("trial {trial}: U A V != S"))?;
        ensure(sm.s.is_diagonal(), || format!("trial {trial}: S not diagonal"))?;
        ensure(sm.u.determinant().abs().is_one() && sm.v.determinant().abs().is_one(), || {
            format!("trial {trial}: not unimodular")
        })?;
        let d: Vec<BigInt> = sm.diagonal();
        for w in d.windows(2) {
            let ok = !w[0].is_negative()
                && if w[0].is_zero() {
                    w[1].is_zero()
                } else {
                    w[1].is_multiple_of(&w[0])
                };
            ensure(ok, || format!("trial {trial}: chain {d:?}"))?;
        }
    }
    Ok(())
}

fn criterion_8() -> Check {
    let d4 = groups::dihedral(4);
    let a = subgroup_generated(&d4, &[1]);
    let q = quotient(&d4, &a).unwrap();
    let aut0 = aut0_generators(&d4, &a, 1).map_err(|e| e.to_string())?;
    let brute = all_isomorphisms(&d4, &d4, 16)
        .unwrap()
        .into_iter()
        .filter(|f| a.elements().iter().all(|&x| a.contains(f.apply(x))))
        .filter(|f| (0..d4.order()).all(|x| q.coset_of(f.apply(x)) == q.coset_of(x)))
        .count();
    ensure(brute == 8, || format!("oracle gives {brute}"))?;
    ensure(aut0.order() == 8, || format!("|Aut_0| = {}", aut0.order()))?;
    for p in aut0.elements() {
        let img = p.images();
        ensure(a.elements().iter().all(|&x| a.contains(img[x])), || "does not stabilize <r>".into())?;
        ensure((0..d4.order()).all(|x| q.coset_of(img[x]) == q.coset_of(x)), || "moves a coset".into())?;
    }
    let psi = GroupHom::identity(&q.group);
    let coset = extend_quotient_isomorphism(&d4, &d4, &a, &a, &psi, 1).map_err(|e| e.to_string())?;
    let maps = coset.elements();
    ensure(maps.len() == 8, || format!("coset has {} maps", maps.len()))?;
    for f1 in &maps {
        for f2 in &maps {
            let quotient_map = f2.inverse().unwrap().then(f1);
            let p = Perm::from_images(quotient_map.images()).unwrap();
            ensure(aut0.contains(&p), || "coset law fails".into())?;
        }
    }
    Ok(())
}

fn power(m: &EndoMatrix, e: usize) -> EndoMatrix {
    (0..e).fold(EndoMatrix::identity(m.moduli()), |acc, _| acc.then(m))
}

fn criterion_9() -> Check {
    let shapes: Vec<Vec<u64>> = vec![
        vec![2],
        vec![4],
        vec![8],
        vec![2, 2],
        vec![2, 4],
        vec![3, 3],
        vec![9],
        vec![2, 2, 2],
        vec![4, 4],
        vec![2, 8],
        vec![27],
        vec![64],
        vec![2, 2, 2, 2],
    ];
    let mut compared = 0;
    for moduli in &shapes {
        let size: u64 = moduli.iter().product();
        assert!(size <= 64);
        let exponent = *moduli.iter().max().unwrap();
        let t = moduli.len();
        let emod: Vec<u64> = (0..t * t).map(|idx| moduli[idx / t]).collect();
        let total: usize = emod.iter().product::<u64>() as usize;
        let auts: Vec<EndoMatrix> = (0..total)
            .map(|i| EndoMatrix::from_data(moduli, mixed_radix_coords(i, &emod)))
            .filter(|m| m.is_homomorphism() && m.to_perm().is_some())
            .collect();
        for c in [1usize, 2, 3] {
            let ring = StructuredRing::group_ring(exponent, &groups::cyclic(c));
            let actors: Vec<&EndoMatrix> = auts.iter().filter(|g| power(g, c).is_identity()).take(12).collect();
            let modules: Vec<ActionRing> = actors
                .iter()
                .map(|g| ActionRing::from_matrices(ring.clone(), moduli.clone(), (0..c).map(|j| power(g, j)).collect()).unwrap())
                .collect();
            for (x, gx) in actors.iter().enumerate() {
                for (y, gy) in actors.iter().enumerate() {
                    let brute = auts.iter().any(|m| gx.then(m) == m.then(gy));
                    let found = module_isomorphism(&modules[x], &modules[y]).map_err(|e| e.to_string())?;
                    ensure(found.is_some() == brute, || format!("{moduli:?} C{c}: {gx:?} vs {gy:?}"))?;
                    if let Some(m) = found {
                        ensure(is_automorphism(&m) && intertwines(&m, &[((*gx).clone(), (*gy).clone())]), || {
                            "returned map is not an intertwining automorphism".into()
                        })?;
                    }
                    compared += 1;
                }
            }
        }
    }
    let r = StructuredRing::group_ring(4, &groups::cyclic(2));
    let inversion = ActionRing::new(r.clone(), vec![4], &[vec![vec![1], vec![3]]]).unwrap();
    let trivial = ActionRing::new(r, vec![4], &[vec![vec![1], vec![1]]]).unwrap();
    ensure(module_isomorphism(&inversion, &trivial).map_err(|e| e.to_string())?.is_none(), || {
        "inversion and trivial Z4 modules reported isomorphic".into()
    })?;
    println!("    {compared} module pairs");
    Ok(())
}

fn criterion_10() -> Check {
    let bin = env!("CARGO_BIN_EXE_extiso");
    let dir = fixtures();
    let runs: Vec<Vec<&str>> = vec![
        vec!["--json", "iso", "d4.gtab", "d4.gtab", "--depth", "1"],
        vec!["--json", "iso", "d4.gtab", "q8.gtab", "--depth", "1"],
        vec!["--json", "aut", "klein3.gtab", "--depth", "1"],
        vec!["--json", "aut", "q8.gtab"],
        vec!["--json", "units", "end_z2z4.ring"],
        vec!["--json", "units", "f2_s3.ring"],
        vec!["--json", "normals", "a4.gtab", "--kind", "tower", "--depth", "2"],
        vec!["--json", "iso-ext", "d4.gtab", "d4.gtab", "--bottom", "d4_rotation.elems"],
        vec!["--json", "decompose", "z2z4.gtab"],
        vec!["--json", "oracle", "dic3.gtab"],
        vec!["aut", "d6.gtab"],
    ];
    for args in runs {
        let once = || Command::new(bin).args(&args).current_dir(&dir).output().unwrap();
        let (a, b) = (once(), once());
        ensure(a.status.code() == b.status.code(), || format!("{args:?}: exit codes differ"))?;
        ensure(a.stdout == b.stdout, || format!("{args:?}: reports differ"))?;
        ensure(!a.stdout.is_empty(), || format!("{args:?}: empty output"))?;
    }
    Ok(())
}

fn record(results: &mut Vec<bool>, n: usize, name: &str, f: impl FnOnce() -> Check) {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    match &outcome {
        Ok(()) => println!("criterion {n:>2} PASS  {name}"),
        Err(why) => println!("criterion {n:>2} FAIL  {name}: {why}"),
    }
    results.push(outcome.is_ok());
}

#[test]
fn acceptance() {
    let mut results = Vec::new();
    let s = sweep();
    record(&mut results, 1, "isomorphism decisions match the oracle on all corpus pairs", || criterion_1(&s));
    record(&mut results, 2, "isomorphism cosets equal the oracle sets", || criterion_2(&s));
    record(&mut results, 3, "automorphism group orders", criterion_3);
    record(&mut results, 4, "unit group orders", criterion_4);
    record(&mut results, 5, "|<1 + J>| = |J|", criterion_5);
    record(&mut results, 6, "Wedderburn components and matrix units", criterion_6);
    record(&mut results, 7, "Smith normal form properties", criterion_7);
    record(&mut results, 8, "Aut_0(D4, <r>) and the coset law", criterion_8);
    record(&mut results, 9, "module isomorphism against exhaustive search", criterion_9);
    record(&mut results, 10, "deterministic CLI reports", criterion_10);
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
