use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sfvs_cli::format::{emit_instance, parse_instance, parse_solution};
use sfvs_core::gen::{gen_instance, GenParams};
use sfvs_core::Kind;

fn sfvs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sfvs")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_owned()
}

fn gen(dir: &Path, kind: &str, n: usize, seed: u64) -> String {
    let file = p(dir, &format!("{kind}-{n}-{seed}.txt"));
    let out = sfvs(&["gen", "--kind", kind, "--n", &n.to_string(), "--seed", &seed.to_string(), "--output", &file]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    file
}

#[test]
fn instance_files_round_trip() {
    for kind in Kind::ALL {
        for seed in 0..20 {
            let inst = gen_instance(&GenParams { kind, n: (seed as usize * 3) % 17, seed, s_frac: 0.4, max_weight: 1 << 40 });
            let text = emit_instance(&inst);
            let back = parse_instance(&text).unwrap();
            assert_eq!(back, inst, "{kind} seed {seed}");
            assert_eq!(emit_instance(&back), text);
        }
    }
}

#[test]
fn solve_then_check_for_every_kind() {
    let dir = tempfile::tempdir().unwrap();
    for kind in ["interval", "permutation", "circular-arc", "cobipartite", "generic"] {
        for seed in [1, 2, 3] {
            let inst = gen(dir.path(), kind, 11, seed);
            let sol = p(dir.path(), &format!("{kind}-{seed}.sol"));
            let out = sfvs(&["solve", "--input", &inst, "--output", &sol]);
            assert_eq!(code(&out), 0, "{kind}: {}", String::from_utf8_lossy(&out.stderr));
            let out = sfvs(&["check", "--input", &inst, "--solution", &sol]);
            assert_eq!(code(&out), 0, "{kind}: {}", String::from_utf8_lossy(&out.stderr));
            let parsed = parse_solution(&std::fs::read_to_string(&sol).unwrap()).unwrap();
            assert_eq!(String::from_utf8(out.stdout).unwrap(), format!("ok weight {}\n", parsed.weight));
            let oracle = sfvs(&["solve", "--input", &inst, "--algo", "oracle"]);
            assert_eq!(parse_solution(&String::from_utf8(oracle.stdout).unwrap()).unwrap().weight, parsed.weight);
        }
    }
}

#[test]
fn tampered_solutions_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen(dir.path(), "interval", 12, 5);
    let good = String::from_utf8(sfvs(&["solve", "--input", &inst]).stdout).unwrap();
    let sol = parse_solution(&good).unwrap();
    assert!(sol.weight > 0, "pick a seed with a nonempty solution");
    let cases = [
        format!("weight {}\nremoved {}\n", sol.weight + 1, sol.removed.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")),
        "weight 0\nremoved\n".to_owned(),
        "weight 0\nremoved 99\n".to_owned(),
        "weight nope\n".to_owned(),
    ];
    for (k, text) in cases.iter().enumerate() {
        let f = p(dir.path(), &format!("bad{k}.sol"));
        std::fs::write(&f, text).unwrap();
        let out = sfvs(&["check", "--input", &inst, "--solution", &f]);
        assert_eq!(code(&out), 1, "case {k}: {text}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let perm = gen(dir.path(), "permutation", 8, 1);
    assert_eq!(code(&sfvs(&["solve", "--input", &perm, "--algo", "interval"])), 2);
    assert_eq!(code(&sfvs(&["solve", "--input", &perm, "--algo", "circular-arc"])), 2);

    let c5 = p(dir.path(), "c5.txt");
    std::fs::write(&c5, "kind generic\nn 5\nweights 1 1 1 1 1\ns 1\nedge 1 2\nedge 2 3\nedge 3 4\nedge 4 5\nedge 5 1\n").unwrap();
    assert_eq!(code(&sfvs(&["solve", "--input", &c5, "--algo", "cobipartite"])), 2);
    assert_eq!(code(&sfvs(&["solve", "--input", &c5])), 0);

    let big = gen(dir.path(), "interval", 25, 1);
    assert_eq!(code(&sfvs(&["solve", "--input", &big, "--algo", "oracle"])), 2);
    assert_eq!(code(&sfvs(&["solve", "--input", &big])), 0);

    let broken = p(dir.path(), "broken.txt");
    std::fs::write(&broken, "kind interval\nn 2\nweights 1\n").unwrap();
    let out = sfvs(&["solve", "--input", &broken]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));

    assert_eq!(code(&sfvs(&["solve", "--input", &p(dir.path(), "missing.txt")])), 1);
    assert_eq!(code(&sfvs(&["solve", "--bogus"])), 1);
    assert_eq!(code(&sfvs(&["gen", "--kind", "tree", "--n", "3", "--seed", "1", "--output", &broken])), 1);
    assert_eq!(code(&sfvs(&["gen", "--kind", "interval", "--n", "3", "--seed", "1", "--s-frac", "3/2", "--output", &broken])), 1);
    assert_eq!(code(&sfvs(&[])), 1);
    let help = sfvs(&["--help"]);
    assert_eq!(code(&help), 0);
    assert!(String::from_utf8_lossy(&help.stdout).contains("solve"));
}

fn read(f: &str) -> Vec<u8> {
    std::fs::read(f).unwrap()
}

#[test]
fn outputs_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for kind in ["interval", "permutation", "circular-arc", "cobipartite"] {
        let (fa, fb) = (gen(a.path(), kind, 30, 9), gen(b.path(), kind, 30, 9));
        assert_eq!(read(&fa), read(&fb));
        let sa = sfvs(&["solve", "--input", &fa]).stdout;
        assert_eq!(sa, sfvs(&["solve", "--input", &fb]).stdout);
        let bench = |d: &Path| {
            let f = p(d, &format!("{kind}.csv"));
            let out = sfvs(&["bench", "--kind", kind, "--sizes", "5,12", "--seeds", "1..3", "--no-timing", "--output", &f]);
            assert_eq!(code(&out), 0);
            read(&f)
        };
        assert_eq!(bench(a.path()), bench(b.path()));
    }
}

#[test]
fn bench_rows_follow_sizes_then_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let f: PathBuf = dir.path().join("b.csv");
    let out = sfvs(&["bench", "--kind", "interval", "--sizes", "4,8,2", "--seeds", "3..5", "--output", f.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&f).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0], ["kind", "n", "m", "seed", "removed_weight", "wall_millis"]);
    let keys: Vec<(&str, &str)> = rows[1..].iter().map(|r| (r[1], r[3])).collect();
    let want: Vec<(String, String)> =
        ["4", "8", "2"].iter().flat_map(|n| (3..=5).map(move |s| (n.to_string(), s.to_string()))).collect();
    assert_eq!(keys, want.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect::<Vec<_>>());
    assert!(rows[1..].iter().all(|r| r[0] == "interval" && r.len() == 6));
    assert_eq!(code(&sfvs(&["bench", "--kind", "interval", "--sizes", "4", "--seeds", "5..3", "--output", f.to_str().unwrap()])), 1);
}

#[test]
fn run_writes_to_the_given_streams() {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    assert_eq!(sfvs_cli::run(["sfvs", "--help"], &mut out, &mut err), 0);
    assert!(!out.is_empty() && err.is_empty());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    assert_eq!(sfvs_cli::run(["sfvs", "check", "--input", "/nonexistent", "--solution", "x"], &mut out, &mut err), 1);
    assert!(String::from_utf8(err).unwrap().starts_with("error: "));
}
