use std::collections::HashMap;
use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn pagtc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pagtc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = pagtc(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// CSV rows keyed by header.
fn records(text: &str) -> Vec<HashMap<String, String>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().unwrap().clone();
    reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            headers
                .iter()
                .map(String::from)
                .zip(r.iter().map(String::from))
                .collect()
        })
        .collect()
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    serde_json::from_str(&ok(&full)).unwrap()
}

const SMALL_GRAPH: &str = "# 8 nodes\na b\na c\nb c\nb d\nc e\nd e\nd f\ne g\nf g\ng h\nf h\n";

#[test]
fn shapley_scores_on_flor_families_sum_to_n() {
    let rows = records(&ok(&[
        "centrality",
        "--graph",
        "bundled:flor-families",
        "--k",
        "2",
    ]));
    assert_eq!(rows.len(), 15);
    let sum: f64 = rows
        .iter()
        .map(|r| r["score"].parse::<f64>().unwrap())
        .sum();
    assert!((sum - 15.0).abs() < 1e-9, "sum {sum}");
    let scores: Vec<f64> = rows.iter().map(|r| r["score"].parse().unwrap()).collect();
    assert!(
        scores.windows(2).all(|w| w[0] >= w[1]),
        "sorted by descending score"
    );
    assert!(rows.iter().any(|r| r["label"] == "Medici"));
}

#[test]
fn dirac_scores_on_fig2_grid() {
    let rows = records(&ok(&[
        "centrality",
        "--graph",
        "bundled:fig2-grid",
        "--k",
        "3",
        "--s0",
        "0,1",
        "--beta",
        "dirac:6",
    ]));
    assert_eq!(rows.len(), 23);
    assert!(rows
        .iter()
        .all(|r| r["score"].parse::<f64>().unwrap().is_finite()));
    assert!(rows.iter().all(|r| r["id"] != "0" && r["id"] != "1"));
}

#[test]
fn oracle_agrees_exactly_on_small_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("small.txt");
    fs::write(&path, SMALL_GRAPH).unwrap();
    let source = format!("file:{}", path.display());
    for beta in ["shapley", "dirac:3", "uniform:2,5", "trunc:0.5"] {
        for k in ["1", "2", "3"] {
            let doc = json(&[
                "centrality",
                "--graph",
                &source,
                "--k",
                k,
                "--s0",
                "a,d",
                "--beta",
                beta,
                "--exact",
                "--oracle",
            ]);
            assert_eq!(doc["summary"]["max_deviation"], 0.0, "{beta} K={k}");
            for row in doc["rows"].as_array().unwrap() {
                assert_eq!(row["exact"], row["oracle"]);
            }
        }
    }
}

#[test]
fn fig2_pagtc_delta_reaches_fourteen() {
    let rows = records(&ok(&[
        "maximize",
        "--graph",
        "bundled:fig2-grid",
        "--k",
        "3",
        "--r",
        "7",
        "--alg",
        "pagtc-delta",
        "--objective",
        "one-round",
    ]));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["one_round"], "14");
    assert_eq!(rows[0]["seed_ids"].split(' ').count(), 7);
}

#[test]
fn flor_families_optimum_for_k3() {
    let rows = records(&ok(&[
        "maximize",
        "--graph",
        "bundled:flor-families",
        "--k",
        "3",
        "--r",
        "6",
        "--alg",
        "optimal",
    ]));
    assert_eq!(rows[0]["one_round"], "9");
    assert_eq!(rows[0]["one_round_pct"], "60.0");
}

#[test]
fn maximize_all_reports_every_algorithm() {
    let rows = records(&ok(&[
        "maximize",
        "--graph",
        "bundled:flor-families",
        "--k",
        "2",
        "--r",
        "4",
        "--all",
        "--objective",
        "full",
    ]));
    let algs: Vec<&str> = rows.iter().map(|r| r["algorithm"].as_str()).collect();
    assert_eq!(algs, ["greedy*", "pagtc-delta", "degree", "optimal"]);
    let best = rows
        .iter()
        .map(|r| r["full"].parse::<usize>().unwrap())
        .max()
        .unwrap();
    assert_eq!(rows[3]["full"], best.to_string());
    assert_eq!(rows[3]["full_pct"], "86.7");
}

#[test]
fn usage_errors_exit_with_two() {
    let cases: [&[&str]; 6] = [
        &[
            "maximize",
            "--graph",
            "bundled:flor-families",
            "--k",
            "3",
            "--r",
            "0",
        ],
        &[
            "maximize",
            "--graph",
            "bundled:nope",
            "--k",
            "3",
            "--r",
            "2",
        ],
        &["centrality", "--graph", "bundled:flor-families", "--k", "0"],
        &[
            "centrality",
            "--graph",
            "bundled:flor-families",
            "--k",
            "2",
            "--s0",
            "Nobody",
        ],
        &[
            "centrality",
            "--graph",
            "bundled:flor-families",
            "--k",
            "2",
            "--beta",
            "banzhaf",
        ],
        &[
            "target",
            "--graph",
            "bundled:flor-families",
            "--k",
            "2",
            "--strategy",
            "trunc:0",
        ],
    ];
    for args in cases {
        assert_eq!(pagtc(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn guard_violations_are_computational_errors() {
    let out = pagtc(&[
        "maximize",
        "--graph",
        "bundled:les-miserables",
        "--k",
        "4",
        "--r",
        "8",
        "--alg",
        "optimal",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("guard"));
}

#[test]
fn degree_targeting_on_flor_families() {
    let dir = tempfile::tempdir().unwrap();
    let growth = dir.path().join("growth.txt");
    let rows = records(&ok(&[
        "target",
        "--graph",
        "bundled:flor-families",
        "--k",
        "4",
        "--strategy",
        "degree",
        "--growth",
        growth.to_str().unwrap(),
    ]));
    assert_eq!(rows[0]["rounds"], "15");
    assert_eq!(rows[0]["rounds_pct"], "100.0");
    assert_eq!(rows[0]["chosen"].split(' ').next(), Some("Medici"));

    let curve = fs::read_to_string(&growth).unwrap();
    let points: Vec<(usize, usize)> = curve
        .lines()
        .map(|line| {
            let (round, count) = line.split_once(' ').unwrap();
            (round.parse().unwrap(), count.parse().unwrap())
        })
        .collect();
    assert_eq!(points.len(), 15);
    assert!(points
        .iter()
        .enumerate()
        .all(|(i, &(round, _))| round == i + 1));
    assert_eq!(points.last().unwrap().1, 15);
}

#[test]
fn threshold_above_max_degree_needs_n_rounds() {
    for strategy in [
        "degree",
        "greedy-one-round",
        "greedy-full",
        "pagtc-shapley",
        "pagtc-trunc:0.5",
    ] {
        let rows = records(&ok(&[
            "target",
            "--graph",
            "bundled:flor-families",
            "--k",
            "7",
            "--strategy",
            strategy,
        ]));
        assert_eq!(rows[0]["rounds"], "15", "{strategy}");
    }
}

#[test]
fn bench_rejects_missing_suite() {
    let out = pagtc(&["bench", "--suite", ""]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("table1") && stderr.contains("fig3"),
        "{stderr}"
    );
}

#[test]
fn table1_optimum_columns() {
    let rows = records(&ok(&["bench", "--suite", "table1"]));
    let opt = |objective: &str| -> Vec<String> {
        rows.iter()
            .filter(|r| r["algorithm"] == "optimal" && r["objective"] == objective)
            .map(|r| r["percent"].clone())
            .collect()
    };
    assert_eq!(opt("one-round"), ["66.7", "60.0", "73.3"]);
    assert_eq!(opt("full"), ["86.7", "73.3", "73.3"]);
    assert!(rows
        .iter()
        .all(|r| r["r"].parse::<usize>().unwrap() == 2 * r["k"].parse::<usize>().unwrap()));
}

#[test]
fn bench_flushes_rows_before_a_failing_cell() {
    let out = pagtc(&[
        "bench",
        "--suite",
        "table1",
        "--graph",
        "bundled:les-miserables",
        "--k",
        "4",
        "--objective",
        "one-round",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let rows = records(&String::from_utf8(out.stdout).unwrap());
    let algs: Vec<&str> = rows.iter().map(|r| r["algorithm"].as_str()).collect();
    assert_eq!(algs, ["greedy", "pagtc-delta", "degree"]);
}

#[test]
fn fig3_reports_influence_ratio() {
    let rows = records(&ok(&["bench", "--suite", "fig3", "--sizes", "100,400"]));
    assert_eq!(rows.len(), 4);
    for pair in rows.chunks(2) {
        assert_eq!(pair[0]["algorithm"], "pagtc-delta");
        assert_eq!(pair[1]["algorithm"], "greedy*");
        let value = |r: &HashMap<String, String>| r["value"].parse::<f64>().unwrap();
        let ratio: f64 = pair[0]["influence_ratio"].parse().unwrap();
        assert!((ratio - value(&pair[0]) / value(&pair[1])).abs() < 1e-12);
        let n: usize = pair[0]["n"].parse().unwrap();
        assert_eq!(pair[0]["r"], n.div_ceil(10).to_string());
    }
    assert_eq!(
        pagtc(&["bench", "--suite", "fig3", "--sizes", "99"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn table2_lists_every_strategy() {
    let tsv = ok(&["bench", "--suite", "table2", "--k", "2", "--format", "tsv"]);
    let mut lines = tsv.lines();
    assert!(lines.next().unwrap().starts_with("suite\tgraph\tn\tk"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn monte_carlo_is_reproducible_and_thread_independent() {
    let base = [
        "centrality",
        "--graph",
        "gen:small-world:4,1,2,9",
        "--k",
        "2",
        "--method",
        "monte-carlo",
        "--samples",
        "3000",
        "--seed",
        "11",
    ];
    let one = ok(&[&base[..], &["--threads", "1"]].concat());
    let two = ok(&[&base[..], &["--threads", "2"]].concat());
    assert_eq!(one, two);
    let other = ok(&[&base[..9], &["--seed", "12"]].concat());
    assert_ne!(one, other);
    assert!(records(&one).iter().all(|r| !r["std_error"].is_empty()));
}

#[test]
fn generated_graphs_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sw.txt");
    ok(&[
        "gen",
        "--side",
        "5",
        "--q",
        "2",
        "--seed",
        "3",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        fs::read_to_string(&path).unwrap(),
        ok(&["gen", "--side", "5", "--q", "2", "--seed", "3"])
    );

    let from_file = json(&[
        "simulate",
        "--graph",
        &format!("file:{}", path.display()),
        "--k",
        "1",
        "--s0",
        "0",
    ]);
    let generated = json(&[
        "simulate",
        "--graph",
        "gen:small-world:5,2,2,3",
        "--k",
        "1",
        "--s0",
        "0",
    ]);
    assert_eq!(from_file["graph"]["nodes"], 25);
    assert_eq!(from_file["graph"]["edges"], generated["graph"]["edges"]);
    assert_eq!(from_file["summary"]["full"], 25);
}

#[test]
fn simulate_reports_both_influences() {
    let doc = json(&[
        "simulate",
        "--graph",
        "bundled:flor-families",
        "--k",
        "1",
        "--s0",
        "Medici",
    ]);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows[0]["active"], 1);
    assert_eq!(doc["summary"]["one_round"], rows[1]["active"]);
    assert_eq!(doc["summary"]["full"], 15);
    assert_eq!(doc["summary"]["full_pct"], "100.0");
}

#[test]
fn json_reports_match_the_published_schema() {
    let schema: Value =
        serde_json::from_str(include_str!("../schemas/report.schema.json")).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let runs: [&[&str]; 7] = [
        &[
            "centrality",
            "--graph",
            "bundled:flor-families",
            "--k",
            "2",
            "--s0",
            "Medici",
            "--exact",
            "--oracle",
        ],
        &[
            "centrality",
            "--graph",
            "bundled:fig2-grid",
            "--k",
            "3",
            "--method",
            "monte-carlo",
            "--samples",
            "200",
        ],
        &[
            "simulate",
            "--graph",
            "bundled:flor-families",
            "--k",
            "2",
            "--s0",
            "Medici,Strozzi",
        ],
        &[
            "maximize",
            "--graph",
            "bundled:flor-families",
            "--k",
            "2",
            "--r",
            "4",
            "--all",
        ],
        &[
            "target",
            "--graph",
            "bundled:les-miserables",
            "--k",
            "2",
            "--strategy",
            "pagtc-trunc:0.25",
        ],
        &["bench", "--suite", "table2", "--k", "3"],
        &["bench", "--suite", "fig3", "--sizes", "100"],
    ];
    for args in runs {
        let doc = json(args);
        let errors: Vec<String> = validator.iter_errors(&doc).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
    }
    let mut broken = json(runs[3]);
    broken["rows"][0]["one_round_pct"] = Value::from("66.67");
    assert!(!validator.is_valid(&broken));
}
