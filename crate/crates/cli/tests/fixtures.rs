//! The bundled documents agree with the library fixtures.
//!
//! Set `DGMORITA_BLESS=1` to regenerate the files from the library.

use std::path::PathBuf;

use dgmorita::document::{load, AnyWorkspace};
use dgmorita::fixtures::bundled;
use dgmorita::{ScalarField, Q};

const HEADERS: [(&str, &str); 6] = [
    ("F1", "the ground field as algebra and coring, with samples, comodules and a trivial braiding"),
    ("F2", "dual numbers k[t]/t^2 in degree 0, the trivial coring, and a coring that is not flat"),
    ("F3", "the 2x2 matrix algebra acting on k^2, with its dual and ground-field samples"),
    ("F4", "the coalgebra on one primitive of degree 2, an acyclic extension, and a dg coalgebra"),
    ("F5", "descent along k -> k x k: descent coring, coring map, witness and samples"),
    ("F6", "dual numbers with the generator in degree 1, the regular module and its path object"),
];

fn path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.cf"))
}

#[test]
fn bundled_documents_match_library_fixtures() {
    let bless = std::env::var_os("DGMORITA_BLESS").is_some();
    for ((name, exporter), (hname, header)) in bundled::<Q>(&ScalarField::Rationals).into_iter().zip(HEADERS) {
        assert_eq!(name, hname);
        let expected = exporter.finish().unwrap_or_else(|e| panic!("{name}: {e:?}")).save();
        let p = path(name);
        if bless {
            std::fs::write(&p, format!("# {name}: {header}\n{expected}")).unwrap();
        }
        let text = std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        let ws = load(&text).unwrap_or_else(|e| panic!("{name}: {e:?}"));
        assert!(matches!(ws, AnyWorkspace::Rational(_)));
        assert_eq!(ws.save(), expected, "{name} is out of date; rerun with DGMORITA_BLESS=1");
    }
}

#[test]
fn load_save_is_idempotent_on_bundled_documents() {
    for (name, _) in HEADERS {
        let text = std::fs::read_to_string(path(name)).unwrap();
        let once = load(&text).unwrap().save();
        let twice = load(&once).unwrap().save();
        assert_eq!(once, twice, "{name}");
    }
}
