use std::process::{Command, Output};

use serde_json::Value;

fn symsub(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symsub")).args(args).output().expect("run symsub")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn phi_sp8_both_modes() {
    let out = symsub(&["phi", "--family", "sp", "--n", "8", "--mode", "both", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["command"]["name"], "phi");
    assert_eq!(v["payload"]["phi_formula"]["value"], 10);
    assert_eq!(v["payload"]["phi_formula"]["source"], "formula-props");
    assert_eq!(v["payload"]["phi_search"]["value"], 10);
    assert_eq!(v["payload"]["phi_search"]["source"], "search");
    assert_eq!(v["payload"]["witness"].as_array().unwrap().len(), 9);
    assert_eq!(v["timing"], Value::Null);
}

#[test]
fn fischer_formula_and_search() {
    let out = symsub(&["phi", "--family", "fischer", "--n", "23", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["payload"]["phi_formula"]["value"], 12);

    let out = symsub(&["phi", "--family", "fischer", "--n", "23", "--mode", "search", "--json"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json_of(&out)["error"]["kind"], "budget-or-unsupported");
}

#[test]
fn verify_table_small() {
    let out = symsub(&["verify-table", "--max-dim", "4", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let rows = v["payload"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 18);
    let u2 = rows.iter().find(|r| r["spec"] == "U(2)").unwrap();
    assert_eq!(u2["status"], "conflict-resolved");
    for r in rows {
        for val in r["values"].as_array().unwrap() {
            assert!(val["source"].is_string());
        }
    }
}

#[test]
fn both_sources_reported() {
    let out = symsub(&["phi", "--family", "u", "--n", "2", "--source", "both", "--json"]);
    let v = json_of(&out);
    assert_eq!(v["payload"]["phi_formula"]["value"], 3);
    assert_eq!(v["payload"]["phi_formula_conclusion"]["value"], 2);
    assert_eq!(v["payload"]["sources_agree"], false);
}

#[test]
fn output_independent_of_threads() {
    let runs: Vec<Vec<u8>> = ["1", "3", "8"]
        .iter()
        .map(|t| {
            let out = symsub(&["--threads", t, "--json", "verify-table", "--max-dim", "5"]);
            assert!(out.status.success());
            out.stdout
        })
        .collect();
    assert!(runs.windows(2).all(|w| w[0] == w[1]));

    let tsv: Vec<Vec<u8>> = ["1", "6"]
        .iter()
        .map(|t| symsub(&["--threads", t, "--tsv", "norton", "--family", "u", "--n", "4", "--budget", "500"]).stdout)
        .collect();
    assert_eq!(tsv[0], tsv[1]);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(symsub(&["phi", "--family", "sp", "--n", "5"]).status.code(), Some(2));
    assert_eq!(symsub(&["phi", "--family", "bogus", "--n", "4"]).status.code(), Some(2));
    assert_eq!(symsub(&["phi", "--family", "o2", "--n", "4", "--eps", "x"]).status.code(), Some(2));
    assert_eq!(symsub(&["verify-table"]).status.code(), Some(2));
    assert_eq!(symsub(&["embed", "--sn", "4", "--target", "sp"]).status.code(), Some(2));
}

#[test]
fn budget_exhaustion_exit_3() {
    let out = symsub(&["search", "--family", "u", "--n", "6", "--node-budget", "50"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn written_witness_failure_is_a_mismatch() {
    let out = symsub(&["witness", "--family", "sp", "--n", "6", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["payload"]["passes"], false);

    let out = symsub(&["witness", "--family", "sp", "--n", "6", "--repaired", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["payload"]["chain_length"]["value"], 7);

    let out = symsub(&["witness", "--family", "u", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn search_spec_as_given() {
    // odd O(n,2) is not rewritten to Sp(n-1) by `search`
    let out = symsub(&["search", "--family", "o2", "--n", "5", "--eps", "-", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["payload"]["spec"], "O-(5,2)");
    assert_eq!(v["payload"]["phi"]["value"], 6);
}

#[test]
fn embed_and_norton() {
    let out = symsub(&["embed", "--sn", "6", "--target", "po3b", "--full-injectivity", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert!(v["payload"]["embeddings"].as_array().unwrap().iter().all(|e| e["passed"] == true));

    let out = symsub(&["norton", "--family", "sp", "--n", "4", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["payload"]["holds"], true);
}

#[test]
fn human_output_names_the_field() {
    let out = symsub(&["search", "--family", "u", "--n", "3", "--witness"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("chain over F4"));
}

#[test]
fn timing_is_opt_in() {
    let out = symsub(&["--timing", "--json", "phi", "--family", "sym", "--n", "5"]);
    assert!(json_of(&out)["timing"]["elapsed_ms"].is_u64());
}
