use std::fs;
use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

const TRUNCATED: &str = "protocol Short\nroles A B\nstate S0 initial\nstate S1\nstate S2 final\n\
transition S0 -> S1 on TimeRequest from A to B\ntransition S1 -> S2 on TimeAccept from B to A\n";
const NONDETERMINISTIC: &str =
    "protocol Fork\nroles A B\nstate S0 initial\nstate S1 final\nstate S2 final\n\
transition S0 -> S1 on TimeRequest from A to B\ntransition S0 -> S2 on TimeRequest from A to B\n";
const SYNTAX: &str =
    "protocol Bad\nroles A B\nstate S0 initial final\ntransition S0 -> on TimeRequest\n";
const CYCLIC: &str = "protocol Loop\nroles A B\nstate S0 initial final\nstate S1\n\
transition S0 -> S1 on TimeRequest from A to B\ntransition S1 -> S0 on TimeAccept from B to A\n";
const APP_ONT: &str = "content Fee\nact Charge : Assertive content=Fee\n";
const APP_PROTO: &str = "protocol Bill\nroles A B\nstate S0 initial\nstate S1 final\ntransition S0 -> S1 on Charge from A to B\n";
const DUP_ONT: &str = "content TimeReq\n";

struct Fixtures {
    dir: PathBuf,
}

impl Fixtures {
    fn new(tag: &str) -> Fixtures {
        let dir = std::env::temp_dir().join(format!("commont-cli-{tag}-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let files = [
            ("truncated.proto", TRUNCATED),
            ("fork.proto", NONDETERMINISTIC),
            ("syntax.proto", SYNTAX),
            ("loop.proto", CYCLIC),
            ("app.ont", APP_ONT),
            ("bill.proto", APP_PROTO),
            ("dup.ont", DUP_ONT),
        ];
        for (name, text) in files {
            fs::write(dir.join(name), text).unwrap();
        }
        Fixtures { dir }
    }

    fn path(&self, name: &str) -> String {
        self.dir.join(name).to_string_lossy().into_owned()
    }

    /// Replaces `@name` arguments with fixture paths.
    fn args(&self, args: &[&str]) -> Vec<String> {
        args.iter()
            .map(|a| match a.strip_prefix('@') {
                Some(name) => self.path(name),
                None => a.to_string(),
            })
            .collect()
    }
}

impl Drop for Fixtures {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.dir);
    }
}

fn commont(args: &[String]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_commont"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

const CATALOG: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/catalog.ont");

#[test]
fn exit_codes() {
    let fx = Fixtures::new("exit");
    let table: &[(&[&str], i32, &str)] = &[
        (&["validate", "AskTime"], 0, "ok"),
        (
            &["validate", "@truncated.proto"],
            1,
            "active commitment at final state",
        ),
        (&["validate", "@fork.proto"], 1, "nondeterministic"),
        (&["validate", "@loop.proto"], 1, "cycle"),
        (&["validate", "@missing.proto"], 2, "missing.proto"),
        (
            &["validate", "@syntax.proto"],
            2,
            "syntax.proto:4:21: error[unexpected-token]",
        ),
        (&["simulate", "AskTime"], 0, "S3 F3"),
        (
            &["simulate", "AskTime", "--run", "TimeRequest,TimeInform"],
            2,
            "TimeAccept",
        ),
        (&["simulate", "@loop.proto"], 2, "--max-steps"),
        (&["simulate", "@loop.proto", "--max-steps", "4"], 0, "run 3"),
        (&["simulate", "@fork.proto"], 2, "nondeterministic"),
        (
            &["traces", "AskTime"],
            0,
            "[(accept(B,A,TimeReq), 1), (TimeInfo, 2)]",
        ),
        (&["traces", "@truncated.proto"], 2, "active commitments"),
        (&["traces", "@loop.proto"], 2, "cycle"),
        (
            &["compare", "P1", "P2"],
            0,
            "strongest: shallow-specialized-equivalent (P2 of P1)",
        ),
        (&["compare", "AskTime", "P1"], 1, "strongest: none"),
        (&["compare", "AskTime"], 2, "required"),
        (&["subsumes", "RequestPulse", "A-RequestPulse"], 0, "true"),
        (&["subsumes", "A-RequestPulse", "RequestPulse"], 1, "false"),
        (
            &["subsumes", "TimeReq", "TimeRequest"],
            2,
            "different hierarchies",
        ),
        (&["subsumes", "Nothing", "TimeRequest"], 2, "unknown class"),
        (&["frobnicate"], 2, "unrecognized subcommand"),
        (
            &[
                "traces",
                "@bill.proto",
                "--ontology",
                CATALOG,
                "--ontology",
                "@app.ont",
            ],
            0,
            "[(Fee, 1)]",
        ),
        (&["traces", "@bill.proto"], 2, "unknown act class `Charge`"),
        (
            &[
                "subsumes",
                "TimeReq",
                "TimeReq",
                "--ontology",
                CATALOG,
                "--ontology",
                "@dup.ont",
            ],
            2,
            "more than once",
        ),
        (
            &[
                "subsumes",
                "Request",
                "TimeRequest",
                "--ontology",
                "@missing.ont",
            ],
            2,
            "missing.ont",
        ),
    ];
    for (args, code, needle) in table {
        let argv = fx.args(args);
        let (got, out, err) = commont(&argv);
        assert_eq!(got, *code, "{argv:?}\nstdout: {out}\nstderr: {err}");
        let text = format!("{out}{err}");
        assert!(text.contains(needle), "{argv:?}: `{needle}` not in\n{text}");
        if *code == 2 {
            assert!(!err.is_empty(), "{argv:?}: errors go to stderr");
        }
    }
}

#[test]
fn simulate_reproduces_asktime_stores() {
    let (code, out, _) = commont(&[
        "simulate".into(),
        "AskTime".into(),
        "--run".into(),
        "TimeRequest,TimeAccept,TimeInform".into(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "S0 F0 = {}\n\
         S1 F1 = {CC(B,A,accept(B,A,TimeReq),TimeReq)@t1}\n\
         S2 F2 = {accept(B,A,TimeReq)@t2, C(B,A,TimeReq)@t3}\n\
         S3 F3 = {accept(B,A,TimeReq)@t2, TimeInfo@t4}\n"
    );
    let (code, out, _) = commont(&[
        "simulate".into(),
        "AskTime".into(),
        "--run".into(),
        "".into(),
    ]);
    assert_eq!((code, out.as_str()), (0, "S0 F0 = {}\n"));
}

fn json_of(args: &[&str]) -> (String, Value) {
    let argv: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let (code, text, err) = commont(&argv);
    assert!(code < 2, "{err}");
    let mut with_json = argv.clone();
    with_json.push("--json".into());
    let (jcode, jtext, _) = commont(&with_json);
    assert_eq!(code, jcode);
    (text, serde_json::from_str(&jtext).expect("valid JSON"))
}

#[test]
fn json_traces_match_text() {
    for p in ["AskTime", "P1", "P2"] {
        let (text, json) = json_of(&["traces", p]);
        let lines: Vec<&str> = text.lines().collect();
        let traces = json.as_array().unwrap();
        assert_eq!(traces.len(), lines.len());
        for (line, trace) in lines.iter().zip(traces) {
            let rebuilt: Vec<String> = trace
                .as_array()
                .unwrap()
                .iter()
                .map(|e| {
                    let content = e["content"].as_str().unwrap();
                    let fact = match e["kind"].as_str().unwrap() {
                        "acceptance" => format!(
                            "accept({},{},{content})",
                            e["roles"][0].as_str().unwrap(),
                            e["roles"][1].as_str().unwrap()
                        ),
                        _ => content.to_string(),
                    };
                    format!("({fact}, {})", e["rank"])
                })
                .collect();
            assert_eq!(format!("[{}]", rebuilt.join(", ")), *line);
        }
    }
}

#[test]
fn json_compare_matches_table() {
    let (text, json) = json_of(&["compare", "P1", "P2"]);
    let relations = json["relations"].as_array().unwrap();
    assert_eq!(relations.len(), 8);
    for r in relations {
        let name = r["relation"].as_str().unwrap();
        let row = text
            .lines()
            .find(|l| l.split_whitespace().next() == Some(name))
            .unwrap();
        let cols: Vec<&str> = row.split_whitespace().collect();
        let mark = |b: &Value| {
            if b["holds"].as_bool().unwrap() {
                "holds"
            } else {
                "fails"
            }
        };
        assert_eq!(cols[1], mark(&r["a_of_b"]), "{name}");
        assert_eq!(cols[2], mark(&r["b_of_a"]), "{name}");
    }
    assert_eq!(
        json["strongest"]["relation"],
        "shallow-specialized-equivalent"
    );
}

#[test]
fn json_validate_and_subsumes() {
    let fx = Fixtures::new("json");
    let (text, json) = json_of(&["validate", &fx.path("truncated.proto")]);
    assert!(text.contains("1 violation"));
    assert_eq!(json["violations"][0]["kind"], "active-commitment");
    assert_eq!(json["violations"][0]["state"], "S2");
    let (text, json) = json_of(&["subsumes", "RequestPulse", "A-RequestPulse"]);
    assert_eq!(text.trim(), "true");
    assert_eq!(json["subsumes"], true);
    let (_, json) = json_of(&["simulate", "AskTime"]);
    assert_eq!(json["runs"][0]["steps"].as_array().unwrap().len(), 4);
    assert_eq!(
        json["runs"][0]["steps"][3]["fluents"][1]["fluent"],
        "TimeInfo"
    );
}
