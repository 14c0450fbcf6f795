use alloc::boxed::Box;
use alloc::string::ToString;
use core::fmt;
use core::str::FromStr;

use super::{build_cyclic, build_product, build_psl2, build_sl2, build_symmetric, GroupTable, Product};
use crate::error::{Error, Result};
use crate::field::{prime_power, PrimePowerField};

/// Compact group names: `cyclic:12`, `sym:4`, `sl2:5`, `psl2:7`, and
/// `prod:<spec>` for the direct product of a group with itself.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Cyclic(usize),
    Symmetric(usize),
    Sl2(usize),
    Psl2(usize),
    Square(Box<GroupSpec>),
}

impl GroupSpec {
    /// Builds a base group. For `prod:` specs the dense product is returned
    /// when it fits, otherwise an error; use [`GroupSpec::build_product`].
    pub fn build(&self) -> Result<GroupTable> {
        match self {
            GroupSpec::Cyclic(n) => build_cyclic(*n),
            GroupSpec::Symmetric(m) => build_symmetric(*m),
            GroupSpec::Sl2(q) => build_sl2(&field_of(*q)?),
            GroupSpec::Psl2(q) => build_psl2(&field_of(*q)?),
            GroupSpec::Square(_) => match self.build_product()? {
                Product::Dense(g) => Ok(g),
                Product::Lazy(_) => Err(Error::GroupTooLarge(alloc::format!(
                    "{self} is too large for a dense table"
                ))),
            },
        }
    }

    pub fn build_product(&self) -> Result<Product> {
        match self {
            GroupSpec::Square(inner) => {
                let g = inner.build()?;
                build_product(&g, &g)
            }
            other => Ok(Product::Dense(other.build()?)),
        }
    }

    /// The factor of a `prod:` spec, or the spec itself.
    pub fn base(&self) -> &GroupSpec {
        match self {
            GroupSpec::Square(inner) => inner,
            other => other,
        }
    }

    pub fn is_product(&self) -> bool {
        matches!(self, GroupSpec::Square(_))
    }
}

fn field_of(q: usize) -> Result<PrimePowerField> {
    let (p, k) = prime_power(q as u64)
        .ok_or_else(|| Error::InvalidParameter(alloc::format!("{q} is not a prime power")))?;
    PrimePowerField::new(p, k)
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadSpec(s.to_string());
        let (kind, rest) = s.trim().split_once(':').ok_or_else(bad)?;
        if kind == "prod" {
            let inner: GroupSpec = rest.parse().map_err(|_| bad())?;
            return Ok(GroupSpec::Square(Box::new(inner)));
        }
        let n: usize = rest.parse().map_err(|_| bad())?;
        Ok(match kind {
            "cyclic" => GroupSpec::Cyclic(n),
            "sym" => GroupSpec::Symmetric(n),
            "sl2" => GroupSpec::Sl2(n),
            "psl2" => GroupSpec::Psl2(n),
            _ => return Err(bad()),
        })
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupSpec::Symmetric(m) => write!(f, "sym:{m}"),
            GroupSpec::Sl2(q) => write!(f, "sl2:{q}"),
            GroupSpec::Psl2(q) => write!(f, "psl2:{q}"),
            GroupSpec::Square(inner) => write!(f, "prod:{inner}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        for s in ["cyclic:12", "sym:4", "sl2:5", "psl2:7", "prod:psl2:7", "prod:prod:cyclic:2"] {
            let spec: GroupSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("psl2".parse::<GroupSpec>().is_err());
        assert!("alt:5".parse::<GroupSpec>().is_err());
        assert!("psl2:x".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn builds() {
        assert_eq!("psl2:5".parse::<GroupSpec>().unwrap().build().unwrap().order(), 60);
        assert_eq!("prod:cyclic:3".parse::<GroupSpec>().unwrap().build().unwrap().order(), 9);
        assert!("psl2:6".parse::<GroupSpec>().unwrap().build().is_err());
    }
}
