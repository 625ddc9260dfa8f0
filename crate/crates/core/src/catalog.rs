//! Embedded catalog of small anyon models.

use crate::error::{Error, Result};
use crate::model::{Model, ModelFile};

const ENTRIES: &[(&str, &str)] = &[
    ("trivial", include_str!("../catalog/trivial.json")),
    ("z2_pointed", include_str!("../catalog/z2_pointed.json")),
    ("semion", include_str!("../catalog/semion.json")),
    ("svec", include_str!("../catalog/svec.json")),
    ("z3_pointed", include_str!("../catalog/z3_pointed.json")),
    ("toric_code", include_str!("../catalog/toric_code.json")),
    ("fibonacci", include_str!("../catalog/fibonacci.json")),
    ("yang_lee", include_str!("../catalog/yang_lee.json")),
    ("ising", include_str!("../catalog/ising.json")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    ENTRIES.iter().map(|(n, _)| *n)
}

/// Raw JSON text of a catalog entry.
pub fn source(name: &str) -> Result<&'static str> {
    ENTRIES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
        .ok_or_else(|| Error::UnknownModel(name.to_string()))
}

pub fn get(name: &str) -> Result<ModelFile> {
    ModelFile::from_json(source(name)?)
}

pub fn model(name: &str) -> Result<Model> {
    get(name)?.into_model()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_loads() {
        for name in names() {
            let m = model(name).unwrap();
            assert_eq!(m.name, name);
        }
    }

    #[test]
    fn unknown_name() {
        assert_eq!(get("nosuch"), Err(Error::UnknownModel("nosuch".into())));
    }

    #[test]
    fn fibonacci_and_yang_lee_shapes() {
        let fib = model("fibonacci").unwrap();
        assert_eq!(fib.ring.rank(), 2);
        let yl = model("yang_lee").unwrap();
        assert_eq!(yl.ring.rank(), 2);
        assert!(yl.f.check_pentagon() < 1e-9);
        assert!(yl.f.check_f_unitarity() > 0.5);
    }
}
