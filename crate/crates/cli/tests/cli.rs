use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn scenarios_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/scenarios")
}

fn hypergame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypergame"))
        .current_dir(scenarios_dir())
        .args(args)
        .output()
        .expect("spawn hypergame")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Compares against tests/golden/NAME; `UPDATE_GOLDEN=1` rewrites it.
fn assert_golden(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, actual).unwrap();
    }
    let expected =
        fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden {}", path.display()));
    assert_eq!(actual, expected, "golden {name} differs");
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json report")
}

const PD_ATTITUDES: [&str; 11] = [
    "rationalise",
    "pd.hg",
    "--target",
    "cooperate,cooperate",
    "--concept",
    "strong",
    "--enumerate-ranks",
    "--attitudes-own",
    "so,po,no,jo",
    "--attitudes-opp",
    "so,po,no,jo",
];

const FRANCE: [&str; 9] = [
    "rationalise",
    "france.hg",
    "--target",
    "g3,f2",
    "--concept",
    "weak",
    "--fix-view",
    "france=france_view.hg",
    "--enumerate-opp-actions",
];

#[test]
fn validate_bundled_pd() {
    let o = hypergame(&["validate", "pd.hg"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_golden("validate_pd.txt", &stdout(&o));
}

#[test]
fn validate_reports_arity_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.hg");
    fs::write(&bad, "player(a).\npayoff(c,d,1).\n").unwrap();
    let o = hypergame(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("arity mismatch"), "{err}");
    assert!(
        err.contains(":2:1:"),
        "diagnostic carries a position: {err}"
    );
}

#[test]
fn missing_file_is_io_error() {
    for cmd in ["validate", "solve", "rationalise"] {
        let o = hypergame(&[cmd, "no_such_file.hg"]);
        assert_eq!(o.status.code(), Some(3), "{cmd}");
    }
}

#[test]
fn solve_examples() {
    let o = hypergame(&["solve", "pd.hg"]);
    assert_eq!(o.status.code(), Some(0));
    assert_golden("solve_pd.txt", &stdout(&o));

    let o = hypergame(&["solve", "france_view.hg", "--json"]);
    let r = json(&o);
    assert_eq!(r["results"]["views"][0]["source"], "france");
    assert_eq!(
        r["results"]["views"][0]["equilibria"],
        serde_json::json!([{"row": "g2", "col": "f2"}])
    );

    let o = hypergame(&["solve", "france.hg", "--json"]);
    assert_eq!(
        json(&o)["results"]["views"][0]["equilibria"],
        serde_json::json!([{"row": "g2", "col": "f3"}])
    );

    let o = hypergame(&["solve", "france.hg", "--cardinal", "--json"]);
    assert_eq!(json(&o)["results"]["views"][0]["source"], "base");

    let o = hypergame(&["solve", "pd.hg", "--ordinal"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn solve_single_cell_game() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("one.hg");
    fs::write(
        &f,
        "player(p). player(q). role(p,row). role(q,column).\n\
         option(row,x). option(column,y). payoff(x,y,7,-2).\n",
    )
    .unwrap();
    let o = hypergame(&["solve", f.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(
        json(&o)["results"]["views"][0]["equilibria"],
        serde_json::json!([{"row": "x", "col": "y"}])
    );
}

#[test]
fn rationalise_pd_levels() {
    let o = hypergame(&PD_ATTITUDES);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_golden("rationalise_pd.txt", &stdout(&o));

    let mut args = PD_ATTITUDES.to_vec();
    args.push("--json");
    let r = json(&hypergame(&args));
    assert_eq!(r["results"]["hypergame_count"], 16);
    for p in r["results"]["players"].as_array().unwrap() {
        assert_eq!(p["retained"].as_array().unwrap().len(), 4);
    }

    args.extend(["--level", "1"]);
    let r = json(&hypergame(&args));
    assert_eq!(r["results"]["hypergame_count"], 4);
}

#[test]
fn rationalise_fall_of_france() {
    let mut args = FRANCE.to_vec();
    args.push("--json");
    let o = hypergame(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert_golden("rationalise_france.json", &text);
    let r: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(r["results"]["hypergame_count"], 1);
    let germany = &r["results"]["players"][0];
    assert_eq!(germany["player"], "germany");
    assert_eq!(
        germany["retained"][0]["believed_cols"],
        serde_json::json!(["f2"])
    );
    assert_eq!(r["warnings"], serde_json::json!([]));
}

#[test]
fn json_and_text_come_from_one_report() {
    let text = stdout(&hypergame(&FRANCE));
    let mut args = FRANCE.to_vec();
    args.push("--json");
    let r = json(&hypergame(&args));
    for (k, v) in r["configuration"].as_object().unwrap() {
        assert!(
            text.contains(&format!("  {k}: {}", v.as_str().unwrap())),
            "{k}"
        );
    }
    for line in r["input"].as_str().unwrap().lines() {
        assert!(text.contains(line));
    }
    for p in r["results"]["players"].as_array().unwrap() {
        for c in p["retained"].as_array().unwrap() {
            for cell in c["matrix"]["cells"].as_array().unwrap() {
                assert!(text.contains(&format!("({}, {})", cell["r_row"], cell["r_col"])));
            }
        }
    }
}

#[test]
fn out_file_matches_json_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = hypergame(&["solve", "pd.hg", "--out", out.to_str().unwrap(), "--json"]);
    assert_eq!(stdout(&o), fs::read_to_string(&out).unwrap());

    let o = hypergame(&["solve", "pd.hg", "--out", "/nonexistent/dir/r.json"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn target_flag_overrides_chosen_with_warning() {
    let o = hypergame(&[
        "rationalise",
        "pd.hg",
        "--target",
        "defect,defect",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = json(&o);
    assert_eq!(
        r["results"]["target"],
        serde_json::json!({"row": "defect", "col": "defect"})
    );
    assert!(r["warnings"][0].as_str().unwrap().contains("overrides"));
    assert_eq!(r["results"]["hypergame_count"], 1);
}

#[test]
fn configuration_errors_exit_2() {
    let cases: [&[&str]; 7] = [
        &["rationalise", "pd.hg", "--target", "cooperate"],
        &["rationalise", "pd.hg", "--target", "attack,defect"],
        &["rationalise", "pd.hg", "--level", "3"],
        &["rationalise", "pd.hg", "--attitudes-own", "xo"],
        &["rationalise", "pd.hg", "--attitudes-own", "so"],
        &[
            "rationalise",
            "pd.hg",
            "--enumerate-ranks",
            "--enumerate-opp-actions",
        ],
        &[
            "rationalise",
            "france.hg",
            "--fix-view",
            "italy=france_view.hg",
        ],
    ];
    for args in cases {
        let o = hypergame(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
    let o = hypergame(&[
        "rationalise",
        "pd.hg",
        "--enumerate-ranks",
        "--enumerate-opp-actions",
        "--joint",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn blow_up_is_refused() {
    let o = hypergame(&["rationalise", "france.hg", "--enumerate-ranks"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("263363788800"), "{}", stderr(&o));

    let o = hypergame(&[
        "rationalise",
        "pd.hg",
        "--enumerate-ranks",
        "--max-candidates",
        "100",
    ]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn thread_count_does_not_change_output() {
    let base = [
        "rationalise",
        "pd.hg",
        "--enumerate-ranks",
        "--concept",
        "weak",
        "--json",
    ];
    let one = stdout(&hypergame(&[&base[..], &["--threads", "1"]].concat()));
    let four = stdout(&hypergame(&[&base[..], &["--threads", "4"]].concat()));
    assert_eq!(one, four);
}

#[test]
fn bundled_scenarios_are_printed_verbatim() {
    for (name, text) in hypergame::scenarios::FILES {
        let o = hypergame(&["scenario", name]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), text);
        let on_disk = fs::read_to_string(scenarios_dir().join(name)).unwrap();
        assert_eq!(on_disk, text);
    }
    assert_eq!(hypergame(&["scenario", "nope"]).status.code(), Some(2));
}
