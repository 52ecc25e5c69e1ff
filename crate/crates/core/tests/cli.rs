use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ris-ssk"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const HEADER: &str = "scheme,N,N_R,m,omega,p,k,M,gamma_db,trials,mode,ped_mc,ped_mc_stderr,\
ped_analytic,ped_high_snr,ped_low_snr,ped_zero_snr,ber_bound,vacuous";

fn column(header: &str, row: &str, name: &str) -> String {
    let i = header.split(',').position(|h| h == name).unwrap();
    row.split(',').nth(i).unwrap().to_string()
}

#[test]
fn point_prints_header_and_row() {
    let o = run(&["point", "--scheme", "ssk", "--n", "32", "--nr", "2", "--m", "1", "--k", "0.1", "--snr-db", "0"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], HEADER);
    let ped: f64 = column(lines[0], lines[1], "ped_analytic").parse().unwrap();
    assert!(ped > 0.0 && ped < 1e-6);
    assert_eq!(column(lines[0], lines[1], "ped_mc"), "");
    assert!(String::from_utf8_lossy(&o.stderr).contains("PED"));
}

#[test]
fn point_zero_snr() {
    let o = run(&["point", "--scheme", "ssk", "--nr", "4", "--snr-db", "-300"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    let (h, r) = (lines.next().unwrap(), lines.next().unwrap());
    let ped: f64 = column(h, r, "ped_analytic").parse().unwrap();
    assert!((ped - 0.75).abs() < 1e-12);
    assert_eq!(column(h, r, "vacuous"), "1");
}

#[test]
fn point_with_monte_carlo() {
    let o = run(&[
        "--trials", "20000", "--seed", "3", "--mode", "surrogate", "point", "--scheme", "rpm", "--order", "8", "--nr", "4",
        "--n", "16", "--snr-db", "-15",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    let (h, r) = (lines.next().unwrap(), lines.next().unwrap());
    assert_eq!(column(h, r, "mode"), "surrogate");
    assert_eq!(column(h, r, "M"), "8");
    assert_eq!(column(h, r, "trials"), "20000");
    assert!(!column(h, r, "ped_mc").is_empty());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["point", "--scheme", "ssk"]).status.code(), Some(2));
    assert_eq!(run(&["point", "--scheme", "ssk", "--nr", "1", "--snr-db", "0"]).status.code(), Some(2));
    assert_eq!(run(&["point", "--scheme", "rpm3", "--nr", "2", "--snr-db", "0"]).status.code(), Some(2));
    assert_eq!(run(&["--mode", "both", "validate"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

fn sweep(dir: &Path, cfg: &str, extra: &[&str]) -> (Output, std::path::PathBuf) {
    let c = dir.join("s.cfg");
    let out = dir.join("s.csv");
    std::fs::write(&c, cfg).unwrap();
    let mut args: Vec<&str> = extra.to_vec();
    args.extend(["sweep", c.to_str().unwrap(), "-o", out.to_str().unwrap()]);
    (run(&args), out)
}

#[test]
fn single_point_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let (o, out) = sweep(dir.path(), "N = 8\nN_R = 2\ngamma_db = 0\n", &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(out).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert_eq!(text.lines().next().unwrap(), HEADER);
}

#[test]
fn empty_grid_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let (o, out) = sweep(dir.path(), "N = 8\ngamma_db = \n", &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn parse_errors_report_the_line_and_leave_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let (o, out) = sweep(dir.path(), "N = 8\n# ok\nk = 0.1, oops\ngamma_db = 0\n", &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    assert!(!out.exists());
}

#[test]
fn sweep_rows_are_in_grid_order_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "scheme = ssk, rpm\nM = 4\nN = 8, 16\nN_R = 2, 3\nk = 0.1\ngamma_db = -20:-10:5\ntrials = 3000\nseed = 4\nmode = exact\n";
    let (o, out) = sweep(dir.path(), cfg, &[]);
    assert!(o.status.success());
    let first = std::fs::read(&out).unwrap();
    let text = String::from_utf8(first.clone()).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2 * 2 * 2 * 3);
    assert!(rows[0].starts_with("ssk,8,2,"));
    assert!(rows[12].starts_with("rpm,8,2,1,1,0,0.1,4,-20,3000,exact,"));
    // N_R = 3 is not a power of two: no BER bound.
    assert!(rows[3].ends_with(",,"));
    for w in ["1", "3"] {
        let (o, out) = sweep(dir.path(), cfg, &["--workers", w]);
        assert!(o.status.success());
        assert_eq!(std::fs::read(&out).unwrap(), first);
    }
    // Global flags override the file.
    let (o, out) = sweep(dir.path(), cfg, &["--trials", "0"]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(out).unwrap();
    assert_eq!(column(HEADER, text.lines().nth(1).unwrap(), "ped_mc"), "");
}

#[test]
fn validate_quick_passes() {
    let o = run(&["validate", "--quick"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.lines().filter(|l| l.starts_with("[PASS]")).count() >= 8);
    assert!(!out.contains("[FAIL]"));
}

#[test]
fn shipped_config_parses() {
    let cfg = Path::new(env!("CARGO_MANIFEST_DIR")).join("fig1.cfg");
    let spec = ris_ssk::cli::SweepSpec::from_file(&cfg).unwrap();
    assert_eq!(spec.len(), 3 * 3 * 2 * 11);
}

#[test]
fn shipped_sweep_matches_closed_form() {
    let cfg = Path::new(env!("CARGO_MANIFEST_DIR")).join("fig1.cfg");
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("fig1.csv");
    let o = bin().arg("sweep").arg(&cfg).arg("-o").arg(&csv).output().unwrap();
    assert!(o.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    let mut checked = 0;
    for row in lines {
        let f = |name| column(header, row, name).parse::<f64>().unwrap();
        let analytic = f("ped_analytic");
        if analytic < 1e-4 {
            continue;
        }
        checked += 1;
        let z = (f("ped_mc") - analytic).abs() / f("ped_mc_stderr");
        assert!(z <= 2.575_829_3, "{row}: {z:.2} stderr");
    }
    assert!(checked > 100);
}
