use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use fssrank::synthetic::{generate, write_corpus, SyntheticSpec};

fn fssrank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fssrank"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &Path, name: &str, body: &str) {
    fs::write(dir.join(name), body).unwrap();
}

/// Three professors at two universities, one journal, four papers.
fn toy_corpus(dir: &Path) {
    fs::create_dir_all(dir).unwrap();
    write(dir, "universities.csv", "university_id,name,macro_region\nA,Alpha,N\nB,Beta,S\n");
    write(
        dir,
        "professors.csv",
        "prof_id,university_id,sds_code,rank,years_active\np1,A,FIS/01,full,5\np2,A,FIS/01,assistant,4\np3,B,FIS/01,associate,5\n",
    );
    write(dir, "sds_table.csv", "sds_code,uda_id,counting_scheme\nFIS/01,2,default\n");
    write(
        dir,
        "journals.csv",
        "journal_id,year,impact_factor,sc_codes\nJ1,2008,2.0,SC1\nJ1,2009,3.0,SC1\n",
    );
    write(
        dir,
        "publications.csv",
        "pub_id,year,journal_id,n_authors,intramural,citations_at_census\nw1,2008,J1,2,1,10\nw2,2008,J1,1,0,4\nw3,2009,J1,3,0,0\nw4,2009,J1,2,0,7\n",
    );
    write(
        dir,
        "authorships.csv",
        "pub_id,prof_id,position\nw1,p1,1\nw1,p2,2\nw2,p3,1\nw3,p1,2\nw4,p3,2\n",
    );
}

fn read_tree(root: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                out.push((path.strip_prefix(root).unwrap().display().to_string(), fs::read(&path).unwrap()));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn toy_corpus_scores_three_professors() {
    let dir = tempfile::tempdir().unwrap();
    let flat = dir.path().join("corpus");
    toy_corpus(&flat);
    let out = dir.path().join("out");
    let o = fssrank(&[
        "score",
        "--corpus",
        s(&flat),
        "--period-before",
        "2007-2011",
        "--period-after",
        "2012-2016",
        "--out",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let scores = fs::read_to_string(out.join("2007-2011/scores.csv")).unwrap();
    let lines: Vec<&str> = scores.lines().collect();
    assert_eq!(lines[0], "prof_id,university_id,sds_code,uda_id,fss_p,scaled_fss");
    assert_eq!(lines.len(), 4);
    let meta = fs::read_to_string(out.join("run_metadata.json")).unwrap();
    assert!(meta.contains("\"theta\": 0.5"));
    assert!(meta.contains("2013-12-31"));
    assert!(out.join("config.txt").exists());
}

#[test]
fn missing_journals_file_exits_2_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    toy_corpus(&corpus);
    fs::remove_file(corpus.join("journals.csv")).unwrap();
    let o = fssrank(&[
        "score",
        "--corpus",
        s(&corpus),
        "--period-before",
        "2007-2011",
        "--period-after",
        "2013-2017",
        "--out",
        s(&dir.path().join("out")),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("journals.csv"));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for (seed, start, end) in [(3, 2007, 2011), (4, 2013, 2017)] {
        let corpus = generate(&SyntheticSpec {
            seed,
            start_year: start,
            end_year: end,
            ..SyntheticSpec::default()
        });
        write_corpus(&corpus, &dir.path().join(format!("corpus/{start}-{end}"))).unwrap();
    }
    let conf = dir.path().join("run.conf");
    fs::write(
        &conf,
        format!(
            "corpus = {}\nperiod_before = 2007-2011\nperiod_after = 2013-2017\nmin_staff = 5\n",
            dir.path().join("corpus").display()
        ),
    )
    .unwrap();
    let mut trees = Vec::new();
    for (run, jobs) in [("a", "1"), ("b", "4")] {
        let out = dir.path().join(run);
        let o = fssrank(&["score", "--config", s(&conf), "--out", s(&out), "--jobs", jobs]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let o = fssrank(&["compare", "--config", s(&conf), "--out", s(&out)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let mut tree = read_tree(&out);
        // config.txt records its own output directory and worker count
        tree.retain(|(name, _)| name != "config.txt");
        trees.push(tree);
    }
    assert!(trees[0].len() >= 9);
    assert_eq!(trees[0], trees[1]);
}

#[test]
fn compare_on_fixture_scores() {
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("rep");
    let o = fssrank(&["replicate", "--out", s(&rep)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("51 of 51 checks passed"));

    let before = rep.join("2007-2011/unit_scores.csv");
    let after = rep.join("2013-2017/unit_scores.csv");
    let universities = rep.join("universities.csv");
    let out = dir.path().join("cmp");
    let o = fssrank(&[
        "compare",
        "--before",
        s(&before),
        "--after",
        s(&after),
        "--universities",
        s(&universities),
        "--out",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let shifts = fs::read_to_string(out.join("shifts.csv")).unwrap();
    assert_eq!(shifts.lines().count(), 61);
    let report = fs::read_to_string(out.join("report.md")).unwrap();
    assert!(report.contains("| Salerno | S | 448 | 0.97 | 20 | 417 | 1.22 | 6 | 0.25 | 14 | 74% |"));

    // identical inputs give no movement
    let same = dir.path().join("same");
    let o = fssrank(&[
        "compare", "--before", s(&before), "--after", s(&before), "--universities", s(&universities), "--out", s(&same),
    ]);
    assert!(o.status.success());
    let text = fs::read_to_string(same.join("shifts.csv")).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    for rec in rdr.records() {
        let rec = rec.unwrap();
        assert_eq!(&rec[9], "0");
        assert_eq!(rec[8].parse::<f64>().unwrap(), 0.0);
    }

    // disjoint unit sets
    let other = dir.path().join("other.csv");
    fs::write(&other, "unit_key,level,period,staff,fss\nNowhere,overall,2013-2017,40,1.0\n").unwrap();
    let o = fssrank(&[
        "compare", "--before", s(&before), "--after", s(&other), "--universities", s(&universities), "--out", s(&same),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("Nowhere") && err.contains("Salerno"), "{err}");
}

#[test]
fn stats_commands_emit_json() {
    let o = fssrank(&["stats", "fisher", "--fixture", "--a", "fss_before", "--b", "fss_after"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["statistic"].as_f64().unwrap() - 2.14).abs() < 0.02);
    assert_eq!(v["df"], serde_json::json!([59, 59]));
    assert!(v["convention"].as_str().unwrap().contains("one-tailed"));

    let o = fssrank(&["stats", "ols", "--fixture", "--y", "delta_fss", "--x", "fss_before", "--x", "south", "--robust"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["coefficients"].as_array().unwrap().len(), 3);
    assert!((v["model_f"]["statistic"].as_f64().unwrap() - 51.5).abs() < 1.5);

    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("v.csv");
    fs::write(&csv_path, "x\n1\n2\n3\n4\n10\n").unwrap();
    let o = fssrank(&["stats", "describe", "--input", s(&csv_path), "--column", "x"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["median"], serde_json::json!(3.0));

    let o = fssrank(&["stats", "describe", "--input", s(&csv_path), "--column", "y"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_flags_are_input_errors() {
    assert_eq!(fssrank(&["score", "--theta", "1.5", "--corpus", "x"]).status.code(), Some(2));
    let o = fssrank(&["score", "--corpus", "x", "--period-before", "2007-2011", "--period-after", "2010-2014"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("overlap"));
}
