//! The files under `corpus/` must parse, validate and match the built-in
//! constructions exactly. Set `FLATSURF_REGEN_CORPUS=1` to rewrite them.

use std::path::PathBuf;

use flatsurf::corpus;
use flatsurf::format::{emit_polygon, emit_surface, parse_polygon, parse_surface};
use flatsurf::TranslationSurface;

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn surface_files() -> Vec<(&'static str, TranslationSurface)> {
    let chain = corpus::fig3_chain();
    let mut out = vec![
        ("torus", corpus::square_torus()),
        ("sheared-torus", corpus::sheared_torus(1)),
        ("rotated-torus", corpus::rotated_torus()),
        ("four-square-torus", corpus::four_square_torus()),
        ("octagon", corpus::regular_octagon()),
        ("octagon-apothem1", corpus::regular_octagon_apothem1()),
        ("decagon", corpus::decagon_h11()),
    ];
    let names = ["chain-1", "chain-2", "chain-3", "chain-4"];
    out.extend(names.into_iter().zip(chain));
    out
}

fn regen() -> bool {
    std::env::var_os("FLATSURF_REGEN_CORPUS").is_some()
}

#[test]
fn surfaces_match() {
    for (name, s) in surface_files() {
        let path = dir().join(format!("{name}.surf"));
        if regen() {
            std::fs::write(&path, emit_surface(&s)).unwrap();
        }
        let text =
            std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let parsed = parse_surface(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(parsed, s, "{name}");
    }
}

#[test]
fn polygons_match() {
    for (name, p) in corpus::polygons() {
        let path = dir().join(format!("{name}.poly"));
        if regen() {
            std::fs::write(&path, emit_polygon(&p, Some(name))).unwrap();
        }
        let text =
            std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let (parsed, n) = parse_polygon(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(parsed, p, "{name}");
        assert_eq!(n.as_deref(), Some(name));
    }
}

#[test]
fn no_stray_files() {
    let known: Vec<String> = surface_files()
        .iter()
        .map(|(n, _)| format!("{n}.surf"))
        .chain(corpus::polygons().iter().map(|(n, _)| format!("{n}.poly")))
        .collect();
    for entry in std::fs::read_dir(dir()).unwrap() {
        let name = entry.unwrap().file_name().into_string().unwrap();
        assert!(known.contains(&name), "unexpected corpus file {name}");
    }
}
