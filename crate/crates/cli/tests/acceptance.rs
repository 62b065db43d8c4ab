//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p sizefn-cli --test acceptance -- --nocapture
//! --test-threads=1` to see the report lines in order.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use common::{edge_patterns, ell, mu, random_cover, random_plain, Plain, PlainCover};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sizefn::experiment::{self, ExperimentConfig};
use sizefn::imaging::Side;
use sizefn::mv::{
    ker_alpha_v_report, mv_grid, mv_relation, persistent_alpha_kernel_rank, persistent_mv_exact,
    provenance_report, suff0_holds, suff3_holds, validate, KernelMethod,
};
use sizefn::sizefn::{cornerpoints, multiplicity, reconstruct, size_function_value};

const SEED: u64 = 0x5eed_2011;

fn report(name: &str, pass: bool, detail: impl std::fmt::Display) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("{status} {name}: {detail}");
    assert!(pass, "{name}: {detail}");
}

fn seconds(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn cover_suite() -> Vec<PlainCover> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    (0..200).map(|_| random_cover(&mut rng, 2..=30)).collect()
}

/// Critical values and midpoints, as strictly ordered pairs.
fn probe_pairs(p: &Plain) -> Vec<(f64, f64)> {
    let probes = p.probes();
    let mut out = Vec::new();
    for (i, &u) in probes.iter().enumerate() {
        for &v in &probes[i + 1..] {
            out.push((u, v));
        }
    }
    out
}

#[test]
fn representation_from_cornerpoints() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let start = Instant::now();
    let mut checked = 0usize;
    let mut mismatches = 0usize;
    for _ in 0..200 {
        let p = random_plain(&mut rng, 5..=50);
        let g = p.graph();
        let cs = cornerpoints(&g);
        for (u, v) in probe_pairs(&p) {
            checked += 1;
            if reconstruct(&cs, u, v).unwrap() != size_function_value(&g, u, v).unwrap() as u64 {
                mismatches += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    report(
        "representation theorem",
        mismatches == 0 && elapsed < Duration::from_secs(10),
        format!(
            "200 graphs, {checked} points, {mismatches} mismatches, {}",
            seconds(elapsed)
        ),
    );
}

#[test]
fn relation_identity() {
    let suite = cover_suite();
    let start = Instant::now();
    let mut rows = 0usize;
    let mut bad = 0usize;
    for c in &suite {
        let d = c.decomposition();
        assert!(validate(&d).is_ok());
        for (_, _, r) in mv_grid(&d) {
            rows += 1;
            if r.identity_residual() != 0 {
                bad += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    report(
        "corrected relation identity",
        bad == 0 && elapsed < Duration::from_secs(30),
        format!(
            "200 covers, {rows} grid points, {bad} nonzero residuals, {}",
            seconds(elapsed)
        ),
    );
}

#[test]
fn union_upper_bound() {
    let mut rows = 0usize;
    let mut bad = 0usize;
    for c in &cover_suite() {
        for (_, _, r) in mv_grid(&c.decomposition()) {
            rows += 1;
            if r.l_x > r.l_a + r.l_b {
                bad += 1;
            }
        }
    }
    report(
        "upper bound l_X <= l_A + l_B",
        bad == 0,
        format!("{rows} grid points, {bad} violations"),
    );
}

#[test]
fn sufficient_conditions() {
    let (mut hits0, mut hits3, mut bad) = (0usize, 0usize, 0usize);
    for c in &cover_suite() {
        let d = c.decomposition();
        for (u, v, r) in mv_grid(&d) {
            let clean = r.ker_v == 0 && r.ker_vu == 0 && r.holds_basic();
            if suff0_holds(&d, u, v).unwrap() {
                hits0 += 1;
                bad += usize::from(!clean);
            }
            if suff3_holds(&d, u, v).unwrap() {
                hits3 += 1;
                bad += usize::from(!clean);
            }
        }
    }
    report(
        "connectivity and acyclicity conditions",
        bad == 0 && hits0 > 0 && hits3 > 0,
        format!("{hits0} + {hits3} points where a condition holds, {bad} counterexamples"),
    );
}

#[test]
fn kernel_rank_cross_check() {
    let (mut checks, mut bad) = (0usize, 0usize);
    for c in &cover_suite() {
        let d = c.decomposition();
        for &v in d.criticals().values() {
            checks += 1;
            let nerve = ker_alpha_v_report(&d, v, KernelMethod::NerveCycleRank).rank_ker_alpha;
            let elim = ker_alpha_v_report(&d, v, KernelMethod::GaussianElimination).rank_ker_alpha;
            if nerve != elim || nerve != c.ker_v(v) {
                bad += 1;
            }
        }
    }
    report(
        "kernel rank: nerve cycle rank = elimination",
        bad == 0,
        format!("{checks} levels, {bad} disagreements"),
    );
}

#[test]
fn cornerpoint_provenance() {
    let (mut points, mut bad) = (0usize, 0usize);
    for c in &cover_suite() {
        let r = provenance_report(&c.decomposition());
        points += r.proper.len() + r.at_infinity.len();
        bad += r.proper.iter().filter(|p| !p.holds()).count();
        bad += r.at_infinity.iter().filter(|p| !p.in_a_or_b).count();
    }
    // 6-cycle at level 0 split into two arcs meeting at 2 and 5, plus a
    // pendant pair hanging off vertex 0.
    let n = 8;
    let mut a = vec![false; n];
    let mut b = vec![false; n];
    [0, 1, 2, 5, 7].iter().for_each(|&i| a[i] = true);
    [2, 3, 4, 5, 6, 7].iter().for_each(|&i| b[i] = true);
    let fixture = PlainCover {
        g: Plain {
            values: vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
            edges: vec![
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 0),
                (7, 6),
                (7, 0),
            ],
        },
        a,
        b,
    };
    let d = fixture.decomposition();
    let r = mv_relation(&d, 0.0, 1.0).unwrap();
    let fixture_ok = validate(&d).is_ok()
        && r.ker_v == 1
        && r.ker_vu == 1
        && fixture.ker_v(1.0) == 1
        && fixture.ker_vu(1.0, 0.0) == 1
        && persistent_alpha_kernel_rank(&d, 0.0, 1.0).unwrap() == 1
        && !persistent_mv_exact(&d, 0.0, 1.0).unwrap();
    report(
        "cornerpoint provenance",
        bad == 0 && fixture_ok,
        format!(
            "{points} cornerpoints, {bad} counterexamples; two-arc cycle ker_v={} ker_vu={} exact={}",
            r.ker_v,
            r.ker_vu,
            persistent_mv_exact(&d, 0.0, 1.0).unwrap()
        ),
    );
}

#[test]
fn oracle_equivalence_small_graphs() {
    let (mut graphs, mut points, mut bad) = (0usize, 0usize, 0usize);
    for n in 1..=8usize {
        let patterns = edge_patterns(n);
        for code in 0..3usize.pow(n as u32) {
            let values: Vec<f64> = (0..n)
                .map(|i| ((code / 3usize.pow(i as u32)) % 3) as f64)
                .collect();
            for edges in &patterns {
                let p = Plain {
                    values: values.clone(),
                    edges: edges.clone(),
                };
                let g = p.graph();
                graphs += 1;
                for (u, v) in probe_pairs(&p) {
                    points += 1;
                    bad += usize::from(size_function_value(&g, u, v).unwrap() != ell(&p, u, v));
                }
                let c = p.levels();
                for (i, &u) in c.iter().enumerate() {
                    for &v in &c[i + 1..] {
                        bad += usize::from(multiplicity(&g, u, v).unwrap() != mu(&p, u, v));
                    }
                }
            }
        }
    }
    report(
        "oracle equivalence on graphs up to 8 vertices",
        bad == 0,
        format!("{graphs} graphs, {points} points, {bad} disagreements"),
    );
}

fn corpus_manifest() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus/manifest.txt")
}

#[test]
fn fingerprint_protocol() {
    let corpus = experiment::load_manifest(corpus_manifest()).unwrap();
    let config = ExperimentConfig {
        occlusions: vec![(Side::Top, 0.2)],
        ..ExperimentConfig::default()
    };
    let start = Instant::now();
    let m = &experiment::fingerprint(&corpus, &config).unwrap()[0];
    let elapsed = start.elapsed();
    let rows = m.diagonal_max_rows();
    report(
        "fingerprint: diagonal is the row maximum (top 0.2)",
        corpus.len() == 10 && rows >= 9 && elapsed < Duration::from_secs(120),
        format!(
            "{rows}/10 rows, dominance {:.2}, {}",
            m.dominance(),
            seconds(elapsed)
        ),
    );
}

#[test]
fn recognition_protocol() {
    let corpus = experiment::load_manifest(corpus_manifest()).unwrap();
    let start = Instant::now();
    let results = experiment::recognize(&corpus, &ExperimentConfig::default()).unwrap();
    let elapsed = start.elapsed();
    let rate = |side: Side, f: f64| {
        results
            .iter()
            .find(|r| r.side == side && r.fraction == f)
            .map(|r| r.rate())
            .unwrap()
    };
    let mut detail = Vec::new();
    let mut pass = elapsed < Duration::from_secs(300);
    for side in [Side::Top, Side::Left] {
        let (lo, hi) = (rate(side, 0.2), rate(side, 0.6));
        pass &= lo >= hi;
        detail.push(format!("{side} 0.2={lo:.2} 0.6={hi:.2}"));
    }
    report(
        "recognition: rate at 0.2 >= rate at 0.6",
        pass,
        format!("{}, {}", detail.join(", "), seconds(elapsed)),
    );
}

/// Runs the binary and returns stdout plus every file written under `out`.
fn run(args: &[&str], out: Option<&Path>) -> Vec<(String, Vec<u8>)> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sizefn"));
    cmd.args(args);
    if let Some(dir) = out {
        cmd.arg("--out").arg(dir);
    }
    let output = cmd.output().unwrap();
    assert!(
        output.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let mut files = vec![("stdout".to_string(), output.stdout)];
    if let Some(dir) = out {
        let mut entries: Vec<_> = std::fs::read_dir(dir)
            .unwrap()
            .map(|e| e.unwrap().path())
            .collect();
        entries.sort();
        for path in entries {
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            files.push((name, std::fs::read(&path).unwrap()));
        }
    }
    files
}

#[test]
fn cli_outputs_are_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let graph = tmp.path().join("g.txt");
    std::fs::write(&graph, "v 0 0\nv 1 2\nv 2 1\ne 0 1\ne 1 2\n").unwrap();
    let cover = tmp.path().join("d.txt");
    std::fs::write(
        &cover,
        "v 0 -3\nv 1 -3\nv 2 -2\nv 3 -2\nv 4 -1\ne 0 2\ne 1 2\ne 1 3\ne 4 0\ne 4 3\n\
         A 0\nA 2\nA 3\nA 4\nB 1\nB 2\nB 3\n",
    )
    .unwrap();
    let manifest = corpus_manifest();
    let manifest = manifest.to_str().unwrap();
    let shape = corpus_manifest().with_file_name("star.pbm");
    let shape = shape.to_str().unwrap();
    let graph = graph.to_str().unwrap();
    let cover = cover.to_str().unwrap();
    let commands: Vec<(&str, Vec<&str>, bool)> = vec![
        ("compute graph", vec!["compute", graph], true),
        (
            "compute csv",
            vec!["compute", graph, "--format", "csv"],
            false,
        ),
        ("compute image", vec!["compute", shape, "--phi", "6"], true),
        ("mv-check", vec!["mv-check", cover], true),
        (
            "mv-check image",
            vec!["mv-check", shape, "--occlude", "left:0.3"],
            false,
        ),
        ("fingerprint", vec!["fingerprint", manifest], true),
        ("recognize", vec!["recognize", manifest], true),
        ("corpus", vec!["corpus"], false),
    ];
    let mut differing = Vec::new();
    for (name, args, with_out) in &commands {
        let outputs: Vec<_> = (0..2)
            .map(|k| {
                let dir = tmp.path().join(format!("{}-{k}", name.replace(' ', "_")));
                let mut args = args.clone();
                let dir_str = dir.to_str().unwrap().to_string();
                if *name == "corpus" {
                    args.push(&dir_str);
                    let files = run(&args, None);
                    let mut entries: Vec<_> = std::fs::read_dir(&dir)
                        .unwrap()
                        .map(|e| e.unwrap().path())
                        .collect();
                    entries.sort();
                    files
                        .into_iter()
                        .chain(entries.into_iter().map(|p| {
                            (
                                p.file_name().unwrap().to_string_lossy().into_owned(),
                                std::fs::read(&p).unwrap(),
                            )
                        }))
                        .collect()
                } else {
                    run(&args, with_out.then_some(dir.as_path()))
                }
            })
            .collect();
        if outputs[0] != outputs[1] || outputs[0].iter().all(|(_, b)| b.is_empty()) {
            differing.push(*name);
        }
    }
    report(
        "determinism of every CLI command",
        differing.is_empty(),
        format!(
            "{} commands run twice, differing: {:?}",
            commands.len(),
            differing
        ),
    );
}
