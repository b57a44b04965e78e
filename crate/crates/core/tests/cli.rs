use std::process::{Command, Output};

fn lcsocle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lcsocle"))
        .args(args)
        .env_remove("LCSOCLE_JOBS")
        .env_remove("LCSOCLE_FORMAT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_hartshorne_passes() {
    let o = lcsocle(&["verify", "--preset", "hartshorne", "--lmax", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("ell,free_rank,star_socle_dim_total,t_socle_dim_total,window_lo,window_hi,certified"));
    assert_eq!(lines.next(), Some("2,1,1,1,0,7,true"));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("verdict: pass"));
}

#[test]
fn sop_failure_exits_one() {
    // a single coefficient cannot be a system of parameters for k[u, v]
    let o = lcsocle(&["verify", "--uvars", "u,v", "--xvars", "x,y", "--f", "u*x + u*y", "--lmax", "3"]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(lcsocle(&["verify", "--preset", "missing"]).status.code(), Some(2));
    assert_eq!(lcsocle(&["verify", "--uvars", "u", "--xvars", "x,y", "--f", "u*x + q*y"]).status.code(), Some(2));
    assert_eq!(lcsocle(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(lcsocle(&["--char", "12", "minors", "--n", "2"]).status.code(), Some(2));
}

#[test]
fn minors_and_family_tables() {
    let o = lcsocle(&["minors", "--n", "2"]);
    assert_eq!(stdout(&o), "generator\nu^2\nu*v\nv^2\n");
    let o = lcsocle(&["ann-family", "--n-max", "2", "--cap", "6"]);
    assert_eq!(stdout(&o), "n,ann_equals_uv_pow_n,minors_equal,mindeg_intersection_so_far\n1,true,true,1\n2,true,true,2\n");
}

#[test]
fn json_output_parses() {
    let o = lcsocle(&["--format", "json", "socle", "--preset", "hartshorne", "--lmax", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["ell"], 2);
    assert_eq!(v[1]["free_rank"], 2);
}

#[test]
fn config_file_and_out_path() {
    let dir = std::env::temp_dir().join(format!("lcsocle-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("s.toml");
    std::fs::write(&cfg, "uvars = [\"u\", \"v\"]\nxvars = [\"x\", \"y\"]\nf = \"u^2*x + v^2*y\"\nell = [2, 3]\n").unwrap();
    let out = dir.join("table.csv");
    let o = lcsocle(&["--out", out.to_str().unwrap(), "vanish", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let table = std::fs::read_to_string(&out).unwrap();
    assert!(table.starts_with("ell,component_total,first_nonzero_degree,certified\n2,"));
    std::fs::remove_dir_all(&dir).unwrap();
}
