use std::process::{Command, Output};

use ria_cli::table::{parse_tables, OutputTable};

fn ria_sim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ria-sim"))
        .args(args)
        .env_remove("RIA_SIM_THREADS")
        .output()
        .expect("spawn ria-sim")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn bounds_k3_row() {
    let out = stdout(&ria_sim(&["bounds", "--kmin", "3", "--kmax", "3", "--epsilon", "1"]));
    assert_eq!(
        out,
        "K,thm1_inner,thm1_outer,tdma,ghasemi_inner,ghasemi_outer,abdoli_inner\n\
         3,0.5,0.545454545,0.333333333,0.428571429,0.714285714,0.387096774\n"
    );
}

#[test]
fn bounds_default_range_and_round_trip() {
    let out = stdout(&ria_sim(&["bounds"]));
    let t = OutputTable::parse_csv(&out).unwrap();
    assert_eq!(t.rows.len(), 9);
    assert_eq!(t.to_csv(), out);
    let again = stdout(&ria_sim(&["bounds"]));
    assert_eq!(out, again);
}

#[test]
fn bounds_invalid_range_is_usage_error() {
    let o = ria_sim(&["bounds", "--kmin", "5", "--kmax", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("kmin"));
}

#[test]
fn simulate_grid_size() {
    let out = stdout(&ria_sim(&[
        "simulate", "--users", "3", "--snr-db", "5:40:5", "--epsilon", "1", "--trials", "50", "--seed", "7",
    ]));
    let t = OutputTable::parse_csv(&out).unwrap();
    assert_eq!(
        t.header,
        ["scheme", "K", "epsilon", "snr_db", "trials", "mean_rate", "outage10", "std_err"]
    );
    let scheme = t.column("scheme").unwrap();
    let ria = t.rows.iter().filter(|r| r[scheme].to_string() == "ria").count();
    let tdma = t.rows.iter().filter(|r| r[scheme].to_string() == "tdma").count();
    assert_eq!((ria, tdma), (8, 8));
    assert_eq!(t.to_csv(), out);
}

#[test]
fn simulate_to_file_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let o = ria_sim(&[
            "simulate", "-k", "3", "--snr-db", "10,30", "--epsilon", "0.5,1", "--trials", "40",
            "--seed", "9", "--dof", "--output", path.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        assert!(o.stdout.is_empty());
    }
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);
    let tables = parse_tables(std::str::from_utf8(&a).unwrap()).unwrap();
    assert_eq!(tables.len(), 2);
    assert_eq!(tables[1].header[5], "dof_slope");
    assert_eq!(tables[1].rows.len(), 4);
}

#[test]
fn simulate_rejects_bad_flags() {
    for args in [
        vec!["simulate", "--epsilon", ""],
        vec!["simulate", "--epsilon", "1.5", "--trials", "2"],
        vec!["simulate", "--snr-db", "40:5:5"],
        vec!["simulate", "--schemes", "zf"],
        vec!["simulate", "--users", "3", "--antennas", "2"],
        vec!["simulate", "--trials", "0"],
        vec!["simulate", "--percentile", "100", "--trials", "2"],
        vec!["outage", "--epsilon", ""],
    ] {
        let o = ria_sim(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn bad_thread_env_is_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_ria-sim"))
        .args(["simulate", "--trials", "2"])
        .env("RIA_SIM_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unwritable_output_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.csv");
    let o = ria_sim(&["bounds", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn outage_grid_and_flat_tdma() {
    let out = stdout(&ria_sim(&["outage", "--users", "3", "--trials", "60", "--seed", "3"]));
    let t = OutputTable::parse_csv(&out).unwrap();
    assert_eq!(t.header, ["scheme", "K", "epsilon", "snr_db", "outage10"]);
    assert_eq!(t.rows.len(), 64);
    let tdma: Vec<_> = t.rows.iter().filter(|r| r[0].to_string() == "tdma").collect();
    assert_eq!(tdma.len(), 32);
    for snr in ["10", "20", "30", "40"] {
        let vals: Vec<String> = tdma
            .iter()
            .filter(|r| r[3].to_string() == snr)
            .map(|r| r[4].to_string())
            .collect();
        assert_eq!(vals.len(), 8);
        assert!(vals.iter().all(|v| *v == vals[0]));
    }
}

#[test]
fn percentile_flag_renames_column() {
    let out = stdout(&ria_sim(&[
        "outage", "--snr-db", "20", "--epsilon", "1", "--trials", "20", "--percentile", "5",
    ]));
    assert!(out.starts_with("scheme,K,epsilon,snr_db,outage5\n"));
}
