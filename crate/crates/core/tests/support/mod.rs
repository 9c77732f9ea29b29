#![allow(dead_code)]

use std::path::PathBuf;

use extcat::cliio::{parse, Problem, ProblemSpec};
use extcat::exactlin::{Field, PrimeField};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn spec(name: &str) -> ProblemSpec {
    let text = std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn load<K: Field>(name: &str, field: K) -> Problem<K> {
    Problem::build(&spec(name), field).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn f2() -> PrimeField {
    PrimeField::new(2).unwrap()
}

pub fn fixture_names() -> Vec<String> {
    let mut names: Vec<String> =
        std::fs::read_dir(fixture_path("")).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).filter(|n| n.ends_with(".toml")).collect();
    names.sort();
    names
}
