mod common;

use common::*;
use qrg_core::group::{build_cyclic, build_product, build_symmetric, Family, GroupTable};

fn check_table(name: &str, g: &GroupTable) {
    g.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
    g.validate_classes().unwrap_or_else(|e| panic!("{name}: {e}"));
    let total: usize = g.classes().iter().map(Vec::len).sum();
    assert_eq!(total, g.order());
    // conjugation by a fixed element maps every class into itself
    for h in [1 % g.order(), g.order() / 2, g.order() - 1] {
        for cell in g.classes() {
            for &x in cell {
                assert_eq!(g.class_of(g.conjugate(h, x as usize)), g.class_of(x as usize));
            }
        }
    }
}

#[test]
fn all_constructors_produce_valid_tables() {
    for (name, g) in small_groups() {
        check_table(&name, &g);
    }
    for q in [4u64, 5, 7, 8, 9, 11, 13, 16] {
        let p = psl2(q);
        check_table(&format!("psl2:{q}"), &p);
        let qq = q as usize;
        let center = if q % 2 == 1 { 2 } else { 1 };
        assert_eq!(p.order(), qq * (qq * qq - 1) / center);
        assert_eq!(p.family(), Family::Psl2);
    }
    for q in [4u64, 5, 7, 8, 9] {
        let s = sl2(q);
        let qq = q as usize;
        assert_eq!(s.order(), qq * (qq * qq - 1));
        check_table(&format!("sl2:{q}"), &s);
    }
}

#[test]
fn product_class_count_multiplies() {
    let pairs = [
        (build_symmetric(3).unwrap(), build_cyclic(4).unwrap()),
        (build_symmetric(4).unwrap(), build_symmetric(3).unwrap()),
        (psl2(5), build_cyclic(2).unwrap()),
    ];
    for (a, b) in pairs {
        let p = build_product(&a, &b).unwrap();
        let g = p.as_dense().unwrap();
        assert_eq!(g.class_count(), a.class_count() * b.class_count());
        check_table("product", g);
        assert_eq!(g.mul(3 * b.order() + 1, 2 * b.order() + 1), a.mul(3, 2) * b.order() + b.mul(1, 1));
    }
}

#[test]
fn a5_squared_has_3600_elements() {
    let a5 = psl2(5);
    let p = build_product(&a5, &a5).unwrap();
    assert_eq!(p.order(), 3600);
    assert_eq!(p.class_count(), 25);
}

#[test]
fn psl25_class_sizes_by_orbit_enumeration() {
    let g = psl2(5);
    let mut sizes: Vec<usize> = g.classes().iter().map(Vec::len).collect();
    sizes.sort_unstable();
    assert_eq!(sizes, [1, 12, 12, 15, 20]);
}
