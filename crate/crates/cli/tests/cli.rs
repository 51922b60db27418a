use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mdag_core::json::{parse, parse_catalog_jsonl, DsepVerdict, JsonCodec};
use mdag_core::models::{generate_all_patterns, reconstruct_binary, FullConditional, ProbeDataset, Table, Witness};
use mdag_core::order::HasseDiagram;
use mdag_core::reduction::ReductionTrace;
use mdag_core::{Exact, Mdag, Pdag};
use serde_json::{json, Value};
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mdag-probe")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const FULL_FACE: &str = r#"{"nodes":["a","b","c"],"edges":[["a","b"]],"facets":[["a","b","c"]]}"#;
const PARTIAL_FACE: &str = r#"{"nodes":["a","b","c"],"edges":[["a","b"]],"facets":[["a","c"]]}"#;
const CONFOUNDED: &str = r#"{"edges":[["a","b"],["u","a"],["u","b"]],"nodes":[{"id":"a","kind":"visible"},{"id":"u","kind":"latent"},{"id":"b","kind":"visible"}]}"#;

#[test]
fn enumerate_counts() {
    let v = parse(&stdout(&["enumerate", "--n", "3", "--counts"])).unwrap();
    assert_eq!(v, json!({"directed": 8, "complexes": 9, "mdags": 72}));
}

#[test]
fn enumerate_catalog_round_trips() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("cat.jsonl");
    stdout(&["enumerate", "--n", "2", "--catalog", s(&path)]);
    let entries = parse_catalog_jsonl(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(entries.len(), 4);
    assert!(entries.iter().enumerate().all(|(i, (k, _))| i == *k));
}

#[test]
fn reduce_latent_free_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let text = "{\"edges\":[[\"a\",\"b\"]],\"nodes\":[{\"id\":\"a\",\"kind\":\"visible\"},{\"id\":\"b\",\"kind\":\"visible\"}]}\n";
    let g = file(&dir, "g.json", text);
    assert_eq!(stdout(&["reduce", "--in", s(&g)]), text);
}

#[test]
fn reduce_writes_replayable_trace() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "g.json", CONFOUNDED);
    let trace = dir.path().join("trace.json");
    let reduced = Pdag::from_json(&stdout(&["reduce", "--in", s(&g), "--trace", s(&trace)])).unwrap();
    let trace = ReductionTrace::from_json(&std::fs::read_to_string(trace).unwrap()).unwrap();
    assert_eq!(trace.replay(&Pdag::from_json(CONFOUNDED).unwrap()).unwrap(), reduced);
}

#[test]
fn to_mdag_then_canonical() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "g.json", CONFOUNDED);
    let m_text = stdout(&["to-mdag", "--in", s(&g)]);
    let m = Mdag::from_json(&m_text).unwrap();
    assert_eq!(m.complex().nontrivial_facets().count(), 1);
    let mf = file(&dir, "m.json", &m_text);
    let can = Pdag::from_json(&stdout(&["canonical", "--in", s(&mf)])).unwrap();
    assert_eq!(can.latents().len(), 1);
    assert_eq!(can.id(can.latents()[0]).as_str(), "λa_b");
}

#[test]
fn split_names_and_subset() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "g.json", CONFOUNDED);
    let full = Pdag::from_json(&stdout(&["split", "--in", s(&g)])).unwrap();
    let names: Vec<&str> = full.nodes().iter().map(|n| n.id.as_str()).collect();
    assert_eq!(names, ["a_flat", "a_sharp", "u", "b_flat", "b_sharp"]);
    let part = Pdag::from_json(&stdout(&["split", "--in", s(&g), "--subset", "a"])).unwrap();
    assert_eq!(part.len(), 4);
}

#[test]
fn dominates_face_pair() {
    let dir = TempDir::new().unwrap();
    let a = file(&dir, "a.json", FULL_FACE);
    let b = file(&dir, "b.json", PARTIAL_FACE);
    assert_eq!(parse(&stdout(&["dominates", "--g", s(&a), "--h", s(&b)])).unwrap(), json!({"dominates": true}));
    assert_eq!(parse(&stdout(&["dominates", "--g", s(&b), "--h", s(&a)])).unwrap(), json!({"dominates": false}));
}

#[test]
fn witness_face_pair() {
    let dir = TempDir::new().unwrap();
    let a = file(&dir, "a.json", FULL_FACE);
    let b = file(&dir, "b.json", PARTIAL_FACE);
    let text = stdout(&["witness", "--g", s(&b), "--h", s(&a)]);
    let v = parse(&text).unwrap();
    assert_eq!(v["verdict"]["status"], json!("infeasible-common-ancestor"));
    let Witness::Distinguishing(w) = Witness::<Exact>::from_json(&text).unwrap() else { panic!("expected data") };
    let can = mdag_core::reduction::canonical_pdag(&Mdag::from_json(FULL_FACE).unwrap());
    assert!(generate_all_patterns(&can, &w.params, true).unwrap().same_data(&w.dataset));
    assert_eq!(stdout(&["witness", "--g", s(&b), "--h", s(&a)]), text);
}

#[test]
fn simulate_reconstruct_shadow_chain() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "g.json", CONFOUNDED);
    let ds_path = dir.path().join("ds.json");
    stdout(&["simulate", "--graph", s(&g), "--seed", "3", "--out", s(&ds_path)]);
    let ds_text = std::fs::read_to_string(&ds_path).unwrap();
    let ds = ProbeDataset::<Exact>::from_json(&ds_text).unwrap();
    let fc_text = stdout(&["reconstruct", "--dataset", s(&ds_path)]);
    let fc = FullConditional::<Exact>::from_json(&fc_text).unwrap();
    assert_eq!(fc, reconstruct_binary(&ds).unwrap());
    let fc_path = file(&dir, "fc.json", &fc_text);
    let shadow = Table::<Exact>::from_json(&stdout(&["shadow", "--fc", s(&fc_path), "--do", "a", "--values", "1"])).unwrap();
    assert_eq!(&shadow, &ds.find(&[0], &[1]).unwrap().table);
    let again = dir.path().join("ds2.json");
    stdout(&["simulate", "--graph", s(&g), "--seed", "3", "--out", s(&again)]);
    assert_eq!(std::fs::read_to_string(again).unwrap(), ds_text);
}

#[test]
fn hasse_json_and_dot() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("h.json");
    stdout(&["hasse", "--n", "3", "--out", s(&out), "--format", "json"]);
    let h = HasseDiagram::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(h.elements, 72);
    let dot = stdout(&["hasse", "--n", "2", "--format", "dot"]);
    assert!(dot.starts_with("digraph"));
}

#[test]
fn dsep_and_commute_check() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "g.json", CONFOUNDED);
    let v = DsepVerdict::from_json(&stdout(&["dsep", "--in", s(&g), "--a", "a", "--b", "b"])).unwrap();
    assert!(!v.d_separated);
    assert_eq!(parse(&stdout(&["commute-check", "--in", s(&g)])).unwrap(), json!({"commutes": true}));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = file(&dir, "bad.json", r#"{"nodes":[{"id":"a","kind":"visible"}],"edges":[["a","zz"]]}"#);
    let out = run(&["reduce", "--in", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"].is_string() && err["message"].is_string());

    let out = run(&["reduce", "--in", s(&dir.path().join("missing.json"))]);
    assert_eq!(out.status.code(), Some(1));

    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["enumerate"]).status.code(), Some(2));
    assert_eq!(run(&["hasse", "--n", "2", "--format", "png"]).status.code(), Some(2));
}
