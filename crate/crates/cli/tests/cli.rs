use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn nmfa(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nmfa"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn generate_moebius_writes_header() {
    let dir = tempfile::tempdir().unwrap();
    let o = nmfa(&["generate", "--class", "moebius", "--n", "16", "--out", "m.txt"], dir.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o), "class=moebius n=16 edges=24 connected=true\n");
    let text = fs::read_to_string(dir.path().join("m.txt")).unwrap();
    assert!(text.starts_with("16 24\n"));
}

#[test]
fn generate_is_repeatable() {
    let dir = tempfile::tempdir().unwrap();
    let a = nmfa(&["generate", "--class", "sk", "--n", "10", "--seed", "7"], dir.path());
    let b = nmfa(&["generate", "--class", "sk", "--n", "10", "--seed", "7"], dir.path());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("10 45\n"));
}

#[test]
fn generate_rejects_odd_cubic() {
    let dir = tempfile::tempdir().unwrap();
    let o = nmfa(&["generate", "--class", "cubic", "--n", "5"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("n must be even"));
}

#[test]
fn exact_reports_triangle_and_moebius() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("tri.txt"), "3 3\n1 2 1\n2 3 1\n1 3 1\n").unwrap();
    let o = nmfa(&["exact", "tri.txt"], dir.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o), "n=3 edges=3\nground_energy=-1\ndegeneracy=6\nmax_cut=2\n");

    nmfa(&["generate", "--class", "moebius", "--n", "16", "--out", "m.txt"], dir.path());
    let o = nmfa(&["exact", "m.txt"], dir.path());
    assert_eq!(stdout(&o), "n=16 edges=24\nground_energy=-20\ndegeneracy=16\nmax_cut=22\n");
}

#[test]
fn exact_refuses_large_instances() {
    let dir = tempfile::tempdir().unwrap();
    nmfa(&["generate", "--class", "cubic", "--n", "30", "--out", "c.txt"], dir.path());
    let o = nmfa(&["exact", "c.txt"], dir.path());
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("limited to 26"));
}

#[test]
fn solve_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    nmfa(&["generate", "--class", "moebius", "--n", "16", "--out", "m.txt"], dir.path());
    let args = ["solve", "m.txt", "--tf", "100", "--runs", "5", "--seed", "3", "--out", "r.csv", "--reference-energy", "-20"];
    let o = nmfa(&args, dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("energy mean="));
    assert!(out.contains("cut mean="));
    assert!(out.contains("p_success="));
    assert!(String::from_utf8_lossy(&o.stderr).contains("wall-clock per run"));

    let csv = fs::read_to_string(dir.path().join("r.csv")).unwrap();
    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    let headers = reader.headers().unwrap().clone();
    assert_eq!(headers.iter().collect::<Vec<_>>(), ["instance_id", "seed", "final_energy", "cut_value", "wall_clock_us"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 5);
    for (k, row) in rows.iter().enumerate() {
        assert_eq!(&row[0], "m.txt");
        assert_eq!(row[1].parse::<u64>().unwrap(), 3 + k as u64);
        let e: f64 = row[2].parse().unwrap();
        let cut: f64 = row[3].parse().unwrap();
        assert_eq!(2.0 * cut + e, 24.0);
        assert_eq!(&row[4], "");
    }

    let again = nmfa(&args, dir.path());
    assert_eq!(again.stdout, o.stdout);
    assert_eq!(fs::read_to_string(dir.path().join("r.csv")).unwrap(), csv);
}

#[test]
fn solve_timing_fills_the_clock_column() {
    let dir = tempfile::tempdir().unwrap();
    nmfa(&["generate", "--class", "moebius", "--n", "8", "--out", "m.txt"], dir.path());
    let o = nmfa(&["solve", "m.txt", "--tf", "20", "--runs", "3", "--out", "r.csv", "--timing"], dir.path());
    assert!(o.status.success());
    let csv = fs::read_to_string(dir.path().join("r.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let t: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(t > 0.0);
    }
}

#[test]
fn solve_reports_typed_failures() {
    let dir = tempfile::tempdir().unwrap();
    let o = nmfa(&["solve", "missing.txt"], dir.path());
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.txt"));

    fs::write(dir.path().join("bad.txt"), "2 1\n1 1 1\n").unwrap();
    let o = nmfa(&["solve", "bad.txt"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2: self-loop"));

    fs::write(dir.path().join("ok.txt"), "2 1\n1 2 1\n").unwrap();
    let o = nmfa(&["solve", "ok.txt", "--alpha", "0"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.conf"), "t_f = 7\nschedule = 0:1, 1:0.5\nn_runs = 2\n").unwrap();
    let o = nmfa(&["schedule-dump", "--config", "run.conf"], dir.path());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 8);
    assert!(text.lines().nth(1).unwrap().ends_with(",1"));

    let o = nmfa(&["schedule-dump", "--config", "run.conf", "--tf", "3"], dir.path());
    assert_eq!(stdout(&o).lines().count(), 4);

    fs::write(dir.path().join("m.txt"), "6 9\n1 2 1\n2 3 1\n3 4 1\n4 5 1\n5 6 1\n1 6 1\n1 4 1\n2 5 1\n3 6 1\n").unwrap();
    let o = nmfa(&["solve", "m.txt", "--config", "run.conf", "--out", "r.csv"], dir.path());
    assert!(stdout(&o).contains("runs=2"));
    let o = nmfa(&["solve", "m.txt", "--config", "run.conf", "--runs", "4", "--out", "r.csv"], dir.path());
    assert!(stdout(&o).contains("runs=4"));

    fs::write(dir.path().join("broken.conf"), "alpha = 0.1\ngamma = 2\n").unwrap();
    let o = nmfa(&["schedule-dump", "--config", "broken.conf"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn trajectory_switch_in_config() {
    let dir = tempfile::tempdir().unwrap();
    nmfa(&["generate", "--class", "moebius", "--n", "16", "--out", "m.txt"], dir.path());
    fs::write(dir.path().join("t.conf"), "t_f = 100\ntrajectory = on\nn_runs = 2\n").unwrap();
    let o = nmfa(&["solve", "m.txt", "--config", "t.conf", "--out", "r.csv"], dir.path());
    assert!(o.status.success());
    let traj = fs::read_to_string(dir.path().join("r.trajectory.csv")).unwrap();
    assert_eq!(traj.lines().count(), 101);
    assert!(traj.starts_with("t,temperature,energy,s0,"));

    let o = nmfa(&["solve", "m.txt", "--config", "t.conf"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn schedule_dump_shape() {
    let dir = tempfile::tempdir().unwrap();
    let o = nmfa(&["schedule-dump", "--tf", "100"], dir.path());
    let text = stdout(&o);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 100);
    assert!(rows.iter().all(|r| r[2] > 0.0));
    assert_eq!(rows[0][2], 2.0);
    assert_eq!(rows[99][2], 0.02);

    let o = nmfa(&["schedule-dump", "--tf", "10", "--schedule", "0:1,0.5:2"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_shape_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let o = nmfa(
        &["bench", "--class", "sk", "--sizes", "6,8", "--instances", "3", "--runs", "50", "--tf", "200", "--per-instance-out", "pi.csv"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = stdout(&o);
    assert_eq!(summary.lines().count(), 3);
    assert!(summary.starts_with("class,n,instances,runs,p_success_median,p_success_q25,p_success_q75"));
    let per = fs::read_to_string(dir.path().join("pi.csv")).unwrap();
    assert_eq!(per.lines().count(), 7);

    let o = nmfa(&["bench", "--class", "sk", "--sizes", "30", "--instances", "1"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = nmfa(&["bench", "--class", "sk", "--instances", "1"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_uses_reference_energies_beyond_enumeration() {
    let dir = tempfile::tempdir().unwrap();
    // Every 3-regular graph on 28 vertices has energy at least -42.
    fs::write(dir.path().join("refs.csv"), "n,instance,energy\n28,0,-42\n28,1,-42\n").unwrap();
    let o = nmfa(
        &["bench", "--class", "cubic", "--sizes", "28", "--instances", "2", "--runs", "10", "--tf", "100",
          "--reference-energy", "refs.csv", "--per-instance-out", "pi.csv"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let per = fs::read_to_string(dir.path().join("pi.csv")).unwrap();
    assert!(per.lines().skip(1).all(|l| l.contains(",-42,reference,")));
}
