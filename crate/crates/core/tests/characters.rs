mod common;

use common::*;
use qrg_core::group::{build_cyclic, build_symmetric};
use qrg_core::repr::{character_table, character_table_seeded, class_matrices, quasirandomness_degree, ORTHOGONALITY_TOL};

fn table_family() -> Vec<(String, qrg_core::GroupTable)> {
    let mut out: Vec<_> = (2..=12).map(|n| (format!("cyclic:{n}"), build_cyclic(n).unwrap())).collect();
    out.push(("sym:3".into(), build_symmetric(3).unwrap()));
    out.push(("sym:4".into(), build_symmetric(4).unwrap()));
    for q in [2, 3, 4, 5, 7, 8, 9] {
        out.push((format!("sl2:{q}"), sl2(q)));
        out.push((format!("psl2:{q}"), psl2(q)));
    }
    out
}

#[test]
fn tables_satisfy_invariants() {
    for (name, g) in table_family() {
        let t = character_table(&g).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(t.degrees().len(), g.class_count(), "{name}");
        let sum: u64 = t.degrees().iter().map(|&d| (d as u64).pow(2)).sum();
        assert_eq!(sum, g.order() as u64, "{name}");
        assert_eq!(t.degrees()[0], 1);
        assert!(t.orthogonality_error() <= ORTHOGONALITY_TOL, "{name}");
        assert!(t.degrees().windows(2).all(|w| w[0] <= w[1]), "{name}");
    }
}

#[test]
fn known_degree_sets() {
    let s3 = character_table(&build_symmetric(3).unwrap()).unwrap();
    assert_eq!(s3.degrees(), &[1, 1, 2]);
    let s4 = character_table(&build_symmetric(4).unwrap()).unwrap();
    assert_eq!(s4.degrees(), &[1, 1, 2, 3, 3]);
    assert_eq!(character_table(&psl2(5)).unwrap().degrees(), &[1, 3, 3, 4, 5]);
    assert_eq!(character_table(&psl2(7)).unwrap().degrees(), &[1, 3, 3, 6, 7, 8]);
    assert_eq!(quasirandomness_degree(&sl2(5)).unwrap(), 2);
    for n in 2..=12 {
        assert_eq!(quasirandomness_degree(&build_cyclic(n).unwrap()).unwrap(), 1);
    }
}

#[test]
fn psl2_degree_floor() {
    for q in [5u64, 7, 9, 11, 13] {
        let d = quasirandomness_degree(&psl2(q)).unwrap();
        assert!(2 * d as u64 >= q - 1, "q={q}: D={d}");
    }
}

#[test]
fn class_matrices_commute_exactly() {
    for g in [sl2(3), psl2(7), build_symmetric(5).unwrap()] {
        let m = class_matrices(&g).unwrap();
        for a in &m {
            for b in &m {
                assert_eq!(a.matmul(b), b.matmul(a));
            }
        }
    }
}

#[test]
fn s3_structure_constants_match_brute_force() {
    let g = build_symmetric(3).unwrap();
    let m = class_matrices(&g).unwrap();
    let classes = g.classes();
    for (i, ci) in classes.iter().enumerate() {
        for (j, cj) in classes.iter().enumerate() {
            for (k, ck) in classes.iter().enumerate() {
                let z = ck[0] as usize;
                let mut count = 0;
                for x in 0..6 {
                    for y in 0..6 {
                        if ci.contains(&(x as u32)) && cj.contains(&(y as u32)) && g.mul(x, y) == z {
                            count += 1;
                        }
                    }
                }
                assert_eq!(m[i].at(j, k), count);
            }
        }
    }
}

#[test]
fn degrees_are_seed_independent_and_tables_reproducible() {
    let g = psl2(7);
    let base = character_table_seeded(&g, 0).unwrap();
    for seed in 1..=5 {
        let t = character_table_seeded(&g, seed).unwrap();
        assert_eq!(t.degrees(), base.degrees());
        let again = character_table_seeded(&g, seed).unwrap();
        for (r1, r2) in t.characters().iter().zip(again.characters()) {
            for (a, b) in r1.iter().zip(r2) {
                assert_eq!(a.re.to_bits(), b.re.to_bits());
                assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
        }
    }
}
