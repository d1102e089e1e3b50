use nestcolor::coloring::{verify_coloring, ColorSet, ListAssignment};
use nestcolor::connectivity::vertex_connectivity_at_least;
use nestcolor::decomposition::two_piece_example;
use nestcolor::gadgets::verify_gadget;
use nestcolor::generate_grid;
use nestcolor::io;
use nestcolor::reductions::{single_clause, small_critical_graph, UNSAT_FIXTURE};
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(dir: &Path, args: &[&str]) -> Run {
    let Output { status, stdout, stderr } =
        Command::new(env!("CARGO_BIN_EXE_nestcolor")).current_dir(dir).args(args).output().unwrap();
    Run {
        code: status.code().unwrap(),
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn put(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn get(dir: &TempDir, name: &str) -> String {
    std::fs::read_to_string(dir.path().join(name)).unwrap()
}

const K4: &str = "planar_rotation 1\nv 0 1 2 3\nv 1 0 3 2\nv 2 0 1 3\nv 3 0 2 1\n";

#[test]
fn solve_grid_writes_a_valid_witness() {
    let d = TempDir::new().unwrap();
    let pg = generate_grid(9, 9);
    put(&d, "g.emb", &io::write_plane(&pg));
    let r = run(d.path(), &["solve", "g.emb", "--witness", "w.txt"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("answer sat"));
    let w = io::parse_witness(&get(&d, "w.txt")).unwrap();
    let l = ListAssignment::uniform(pg.graph(), ColorSet::range(5));
    verify_coloring(pg.graph(), &l, &w).unwrap();
}

#[test]
fn solve_exit_codes() {
    let d = TempDir::new().unwrap();
    put(&d, "k4.emb", K4);
    put(&d, "l3", "*: 1 2 3\n");
    // the default depth policy needs lists of size 5 here
    assert_eq!(run(d.path(), &["solve", "k4.emb", "--lists", "l3"]).code, 2);
    assert_eq!(run(d.path(), &["solve", "k4.emb", "--lists", "l3", "--k", "1"]).code, 2);
    let r = run(d.path(), &["solve", "k4.emb", "--lists", "l3", "--k", "1", "--unsafe-k-ack", "--cross-check"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("answer unsat"));
    assert_eq!(run(d.path(), &["solve", "missing.emb"]).code, 2);
    assert_eq!(run(d.path(), &["solve", "k4.emb", "--k", "many"]).code, 2);
    put(&d, "plain", "planar_rotation 0\nv 0 1\nv 1 0\n");
    assert_eq!(run(d.path(), &["solve", "plain"]).code, 2);
}

#[test]
fn malformed_rotation_names_the_line() {
    let d = TempDir::new().unwrap();
    put(&d, "bad.emb", "planar_rotation 1\nv 0 1\nv 1 x\n");
    let r = run(d.path(), &["solve", "bad.emb"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 3"), "{}", r.stderr);
}

#[test]
fn pieces_file_and_thread_determinism() {
    let d = TempDir::new().unwrap();
    put(&d, "two.pieces", &io::write_pieces(&two_piece_example()));
    let go = |threads: &str| {
        let r = run(
            d.path(),
            &["solve", "two.pieces", "--k", "1", "--unsafe-k-ack", "--cross-check", "--threads", threads, "--format", "json"],
        );
        assert_eq!(r.code, 0, "{}", r.stderr);
        let mut v: Value = serde_json::from_str(&r.stdout).unwrap();
        v.as_object_mut().unwrap().remove("timings");
        v
    };
    let one = go("1");
    assert_eq!(one, go("4"));
    assert_eq!(one["answer"], "sat");
    assert_eq!(one["oracle"]["agrees"], true);
    assert_eq!(one["pieces"].as_array().unwrap().len(), 2);
}

#[test]
fn overlapping_vortices_are_rejected() {
    let d = TempDir::new().unwrap();
    let mut text = io::write_pieces(&two_piece_example());
    text.push_str("VORTEX 0 2\nX 1 6 9\nX 2 7 9\nB 6 7\nE 9 6\n");
    put(&d, "bad.pieces", &text);
    let r = run(d.path(), &["solve", "bad.pieces"]);
    assert_eq!(r.code, 2, "{}", r.stdout);
    assert!(r.stderr.contains("bad.pieces"));
}

#[test]
fn reduce_logs_removals() {
    let d = TempDir::new().unwrap();
    put(&d, "g.emb", &io::write_plane(&generate_grid(9, 9)));
    put(&d, "x", "0 8 72 80\n");
    let r = run(d.path(), &["reduce", "g.emb", "--k", "1", "--x-file", "x", "-o", "r.emb", "--log", "removed"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let removed = io::parse_vertex_set(&get(&d, "removed")).unwrap();
    assert!(!removed.is_empty());
    assert!(removed.iter().all(|v| ![0, 8, 72, 80].contains(v)));
    let red = io::parse_plane(&get(&d, "r.emb")).unwrap();
    assert_eq!(red.num_vertices() + removed.len(), 81);
    // the default depth is far beyond any nest in this grid
    run(d.path(), &["reduce", "g.emb", "--log", "none"]);
    assert_eq!(get(&d, "none"), "");
}

#[test]
fn tw_and_verify_td() {
    let d = TempDir::new().unwrap();
    put(&d, "g.emb", &io::write_plane(&generate_grid(4, 4)));
    assert_eq!(run(d.path(), &["tw", "g.emb", "--exact", "-o", "g.td"]).code, 0);
    let r = run(d.path(), &["verify-td", "g.emb", "--td", "g.td"]);
    assert_eq!((r.code, r.stdout.trim()), (0, "valid width 4"));
    put(&d, "bad.td", "s td 2 2 16\nb 1 0 1\nb 2 2 3\n1 2\n");
    let r = run(d.path(), &["verify-td", "g.emb", "--td", "bad.td", "--format", "json"]);
    assert_eq!(r.code, 1);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["valid"], false);
}

#[test]
fn phi_and_oracle() {
    let d = TempDir::new().unwrap();
    put(&d, "k4.emb", K4);
    put(&d, "l4", "*: 1 2 3 4\n");
    let r = run(d.path(), &["phi", "k4.emb", "--lists", "l4", "--x", "0,1,2"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout.lines().count(), 24);
    put(&d, "l3", "*: 1 2 3\n");
    assert_eq!(run(d.path(), &["phi", "k4.emb", "--lists", "l3", "--x", "0"]).code, 1);
    let r = run(d.path(), &["oracle", "k4.emb", "--lists", "l4", "--witness", "w"]);
    assert_eq!((r.code, r.stdout.trim()), (0, "sat"));
    assert_eq!(io::parse_witness(&get(&d, "w")).unwrap().0.len(), 4);
    assert_eq!(run(d.path(), &["oracle", "k4.emb", "--lists", "l3"]).code, 1);
    assert_eq!(run(d.path(), &["oracle", "k4.emb", "--cap", "2"]).code, 2);
}

#[test]
fn gadget_catalog_round_trip() {
    let d = TempDir::new().unwrap();
    let r = run(d.path(), &["gadget", "--exclude", "AAA,ABC", "--k", "5", "-o", "g.cat"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let cat = io::parse_catalog(&get(&d, "g.cat")).unwrap();
    assert_eq!(cat.len(), 1);
    verify_gadget(&cat[0]).unwrap();
    assert_eq!(cat[0].family.excluded().len(), 2);
    assert_eq!(run(d.path(), &["gadget", "--exclude", "XYZ", "--k", "5"]).code, 2);
    assert_eq!(run(d.path(), &["gadget", "--index", "1"]).code, 2);
}

#[test]
fn reduce3sat_verdicts() {
    let d = TempDir::new().unwrap();
    put(&d, "one.cnf", &io::write_cnf(&single_clause()));
    let r = run(d.path(), &["reduce3sat", "one.cnf", "--solve", "--cross-check", "-o", "g"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stderr.starts_with("sat "));
    assert!(matches!(io::parse_graph(&get(&d, "g")).unwrap(), io::GraphInput::Plain(_)));
    put(&d, "unsat.cnf", UNSAT_FIXTURE);
    let r = run(d.path(), &["reduce3sat", "unsat.cnf", "--solve", "-o", "g"]);
    assert_eq!((r.code, r.stderr.trim()), (1, "unsat"));
}

#[test]
fn quasiedge_wheelfill_chain() {
    let d = TempDir::new().unwrap();
    put(&d, "k4.emb", K4);
    assert_eq!(run(d.path(), &["quasiedge", "k4.emb", "-o", "q.emb"]).code, 0);
    let r = run(d.path(), &["wheelfill", "q.emb", "-o", "w.emb", "--lists-out", "w.lists"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let g3 = io::parse_plane(&get(&d, "w.emb")).unwrap();
    let l3 = io::parse_lists(&get(&d, "w.lists"), g3.graph()).unwrap();
    assert!(vertex_connectivity_at_least(g3.graph(), 4));
    assert_eq!(l3.iter().count(), g3.num_vertices());
    assert_eq!(l3.size_range(g3.graph()).1, 4);
}

#[test]
fn lift_and_verify_critical() {
    let d = TempDir::new().unwrap();
    put(&d, "k4.emb", K4);
    let r = run(d.path(), &["lift", "k4.emb", "--k", "4", "--t", "2"]);
    assert_eq!((r.code, r.stderr.trim()), (0, "palette 6"));
    assert!(matches!(io::parse_graph(&r.stdout).unwrap(), io::GraphInput::Plain(g) if g.num_edges() == 15));
    let crit = small_critical_graph();
    put(&d, "c.emb", &io::write_plane(&crit.plane));
    put(&d, "c.lists", &io::write_lists(&crit.lists));
    let x = crit.x.to_string();
    let r = run(d.path(), &["verify-critical", "c.emb", "--lists", "c.lists", "--x", &x]);
    assert_eq!((r.code, r.stdout.trim()), (0, "valid"));
    put(&d, "l3", "*: 1 2 3\n");
    assert_eq!(run(d.path(), &["verify-critical", "k4.emb", "--lists", "l3", "--x", "0"]).code, 1);
}
