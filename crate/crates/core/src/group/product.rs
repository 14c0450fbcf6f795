use alloc::format;
use alloc::vec::Vec;

use super::{sort_classes, Family, GroupTable};
use crate::error::{Error, Result};

/// Products up to this order get a dense Cayley table (`n^2` u32 entries,
/// 64 MiB at the limit). Larger products are served as [`ProductView`]s.
pub const DENSE_PRODUCT_LIMIT: usize = 4096;

/// Direct product `G x H` with multiplication computed componentwise.
///
/// Element `(x, y)` has index `x * |H| + y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductView {
    left: GroupTable,
    right: GroupTable,
}

impl ProductView {
    pub fn new(left: GroupTable, right: GroupTable) -> Result<Self> {
        let n = left.order().checked_mul(right.order());
        match n {
            Some(n) if n <= u32::MAX as usize => Ok(ProductView { left, right }),
            _ => Err(Error::GroupTooLarge(format!(
                "{} x {} overflows the u32 index space",
                left.order(),
                right.order()
            ))),
        }
    }

    pub fn left(&self) -> &GroupTable {
        &self.left
    }

    pub fn right(&self) -> &GroupTable {
        &self.right
    }

    pub fn order(&self) -> usize {
        self.left.order() * self.right.order()
    }

    #[inline]
    pub fn compose(&self, x: usize, y: usize) -> usize {
        x * self.right.order() + y
    }

    #[inline]
    pub fn split(&self, a: usize) -> (usize, usize) {
        (a / self.right.order(), a % self.right.order())
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        let (x1, y1) = self.split(a);
        let (x2, y2) = self.split(b);
        self.compose(self.left.mul(x1, x2), self.right.mul(y1, y2))
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        let (x, y) = self.split(a);
        self.compose(self.left.inv(x), self.right.inv(y))
    }

    pub fn class_count(&self) -> usize {
        self.left.class_count() * self.right.class_count()
    }

    pub fn label(&self, a: usize) -> alloc::string::String {
        let (x, y) = self.split(a);
        format!("({},{})", self.left.label(x), self.right.label(y))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Product {
    Dense(GroupTable),
    Lazy(ProductView),
}

impl Product {
    pub fn order(&self) -> usize {
        match self {
            Product::Dense(g) => g.order(),
            Product::Lazy(v) => v.order(),
        }
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match self {
            Product::Dense(g) => g.mul(a, b),
            Product::Lazy(v) => v.mul(a, b),
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        match self {
            Product::Dense(g) => g.inv(a),
            Product::Lazy(v) => v.inv(a),
        }
    }

    pub fn class_count(&self) -> usize {
        match self {
            Product::Dense(g) => g.class_count(),
            Product::Lazy(v) => v.class_count(),
        }
    }

    pub fn as_dense(&self) -> Option<&GroupTable> {
        match self {
            Product::Dense(g) => Some(g),
            Product::Lazy(_) => None,
        }
    }
}

/// `G x H`, dense up to [`DENSE_PRODUCT_LIMIT`] elements.
pub fn build_product(left: &GroupTable, right: &GroupTable) -> Result<Product> {
    let view = ProductView::new(left.clone(), right.clone())?;
    let n = view.order();
    if n > DENSE_PRODUCT_LIMIT {
        return Ok(Product::Lazy(view));
    }
    let mut mul = Vec::with_capacity(n * n);
    for a in 0..n {
        mul.extend((0..n).map(|b| view.mul(a, b) as u32));
    }
    let labels = (0..n).map(|a| view.label(a)).collect();
    let mut g = GroupTable::from_table_unchecked(Family::Product, n, mul, labels)?;
    // Classes of a direct product are exactly the products of classes.
    let mut classes = Vec::with_capacity(view.class_count());
    for cl in left.classes() {
        for cr in right.classes() {
            let mut cell = Vec::with_capacity(cl.len() * cr.len());
            for &x in cl {
                cell.extend(cr.iter().map(|&y| view.compose(x as usize, y as usize) as u32));
            }
            classes.push(cell);
        }
    }
    sort_classes(&mut classes);
    g.set_classes(classes);
    Ok(Product::Dense(g))
}
