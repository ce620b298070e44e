mod common;

use common::{corpus_of, onomast, stdout, synthetic_corpus, write};
use tempfile::tempdir;

const TABLE1: &str = "probability_pct,sample_size,expected,sd,sd_pct
20.0,100,20,4,4.0
3.0,100,3,2,1.7
1.5,100,2,1,1.2
20.0,1000,200,13,1.3
3.0,1000,30,5,0.5
1.5,1000,15,4,0.4
20.0,10000,2000,40,0.4
3.0,10000,300,17,0.2
1.5,10000,150,12,0.1
20.0,100000,20000,126,0.1
3.0,100000,3000,54,0.1
1.5,100000,1500,38,0.0
";

#[test]
fn stats_report_is_stable_and_thread_independent() {
    let dir = tempdir().unwrap();
    let input = write(dir.path(), "corpus.csv", &synthetic_corpus(10_000, 1));
    let run = |threads: &str| {
        let out = onomast(&[
            "stats",
            "-i",
            &input,
            "--span",
            "1800-1829",
            "--span",
            "1830-1859",
            "--threads",
            threads,
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        stdout(&out)
    };
    let first = run("1");
    assert!(first.starts_with("cohort,sex,top_name,top_pop,topk_pop,info_Is,sample_size\n"));
    assert_eq!(first.lines().count(), 5);
    let rows: Vec<&str> = first.lines().skip(1).map(|l| &l[..11]).collect();
    assert_eq!(
        rows,
        ["1800-1829,F", "1800-1829,M", "1830-1859,F", "1830-1859,M"]
    );
    assert_eq!(first, run("1"));
    assert_eq!(first, run("7"));
}

#[test]
fn too_few_names_exits_2_and_names_the_cohort() {
    let dir = tempdir().unwrap();
    let rows: Vec<_> = ["AA", "AB", "AC", "AD", "AE", "AF", "AG", "AH", "AI"]
        .iter()
        .map(|n| (*n, "F", 10, 1900))
        .collect();
    let input = write(dir.path(), "nine.csv", &corpus_of(&rows));
    let out = onomast(&["stats", "-i", &input, "--span", "1890", "--sex", "F"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("1890 F") && err.contains("insufficient_distinct_names"),
        "{err}"
    );
    let ok = onomast(&[
        "stats", "-i", &input, "--span", "1890", "--sex", "F", "--k", "9",
    ]);
    assert!(ok.status.success());
}

#[test]
fn parse_failures_exit_1() {
    let dir = tempdir().unwrap();
    let no_sex = write(dir.path(), "bad.csv", "name,year\nMary,1880\n");
    assert_eq!(
        onomast(&["stats", "-i", &no_sex, "--span", "1800"])
            .status
            .code(),
        Some(1)
    );
    let missing = dir.path().join("missing.csv");
    assert_eq!(
        onomast(&["stats", "-i", missing.to_str().unwrap(), "--span", "1800"])
            .status
            .code(),
        Some(1)
    );
    let bad_table = write(
        dir.path(),
        "table.csv",
        "variant,canonical,sex_override\nMARIA,MARY,\nMARY,MARIE,\n",
    );
    let input = write(dir.path(), "ok.csv", &corpus_of(&[("Mary", "F", 1, 1880)]));
    let out = onomast(&[
        "--coding-table",
        &bad_table,
        "stats",
        "-i",
        &input,
        "--span",
        "1879",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(onomast(&["stats", "--span", "1800"]).status.code(), Some(1));
    assert_eq!(
        onomast(&["--format", "xml", "samplevar"]).status.code(),
        Some(1)
    );
    assert_eq!(onomast(&["--help"]).status.code(), Some(0));
}

#[test]
fn comm_of_a_cohort_with_itself_is_zero() {
    let dir = tempdir().unwrap();
    let input = write(dir.path(), "corpus.csv", &synthetic_corpus(10_000, 2));
    let out = onomast(&[
        "comm",
        "-i",
        &input,
        "--from",
        "1800-1819",
        "--to",
        "1800-1819",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        stdout(&out),
        "span,sex,c1,c2,c3,c4_pct,new_topk,turnover_pa,notes\n\
         1800-1819/1800-1819,F,0.0000,0.0000,0.0000,0,0,,\n\
         1800-1819/1800-1819,M,0.0000,0.0000,0.0000,0,0,,\n"
    );
}

#[test]
fn unobserved_year1_name_is_annotated() {
    let dir = tempdir().unwrap();
    let mut rows = Vec::new();
    for (name, n) in [("AA", 6), ("AB", 3), ("AC", 1)] {
        rows.extend(std::iter::repeat_n((name, "F", 0, 1800), n));
    }
    for (name, n) in [("AA", 5), ("AD", 4), ("AB", 1)] {
        rows.extend(std::iter::repeat_n((name, "F", 0, 1810), n));
    }
    let input = write(dir.path(), "pair.csv", &corpus_of(&rows));
    let out = onomast(&[
        "comm", "-i", &input, "--from", "1800", "--to", "1810", "--sex", "F", "--k", "2",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    assert!(row.starts_with("1800/1810,F,"), "{row}");
    assert!(row.ends_with(",1,0.1000,fallback=1"), "{row}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("AD unobserved"));
}

#[test]
fn exhausted_year1_mass_exits_3() {
    let dir = tempdir().unwrap();
    let mut rows = Vec::new();
    for (name, n) in [("AA", 5), ("AB", 5)] {
        rows.extend(std::iter::repeat_n((name, "F", 0, 1800), n));
    }
    for (name, n) in [("AA", 5), ("AB", 4), ("AC", 1)] {
        rows.extend(std::iter::repeat_n((name, "F", 0, 1810), n));
    }
    let input = write(dir.path(), "pair.csv", &corpus_of(&rows));
    let out = onomast(&[
        "comm", "-i", &input, "--from", "1800", "--to", "1810", "--sex", "F", "--k", "2",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("divergent_other_mass"));
}

#[test]
fn samplevar_default_grid() {
    let out = onomast(&["samplevar"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), TABLE1);
}

#[test]
fn conquest_defaults() {
    let out = onomast(&["conquest", "--t11", "0.75"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "span,sex,c1,c2,c3,c4_pct,new_topk,turnover_pa,notes\nconquest-model,-,1.0834,0.0586,4.1174,982,10,,\n"
    );
    assert_eq!(onomast(&["conquest"]).status.code(), Some(1));
}

#[test]
fn simulate_then_fit() {
    let dir = tempdir().unwrap();
    let sim = dir.path().join("sim.csv");
    let sim = sim.to_str().unwrap();
    let out = onomast(&[
        "simulate", "--alpha", "0.1", "--births", "50000", "--seed", "7", "--out", sim,
    ]);
    assert!(out.status.success());
    let meta = std::fs::read_to_string(format!("{sim}.meta")).unwrap();
    assert!(meta.contains("rng=chacha8\n") && meta.contains("seed=7\n"));
    let records = std::fs::read_to_string(sim).unwrap();
    assert_eq!(records.lines().count(), 50_001);
    assert!(records
        .lines()
        .nth(1)
        .unwrap()
        .ends_with(",F,,1900,birth_register,,"));

    let series = dir.path().join("series.csv");
    let out = onomast(&[
        "--coding-table",
        "none",
        "fit",
        "-i",
        sim,
        "--span",
        "1900",
        "--sex",
        "F",
        "--max-rank",
        "100",
        "--series",
        series.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(&row[..2], ["1900", "F"]);
    assert!(row[4].parse::<f64>().unwrap() >= 0.9, "{text}");
    assert_eq!(row[5], "100");
    let series = std::fs::read_to_string(series).unwrap();
    assert!(series.starts_with("log2_rank,log2_freq\n0.000000,"));
    assert_eq!(series.lines().count(), 101);
}

#[test]
fn ingest_standardizes_and_reports_rejections() {
    let dir = tempdir().unwrap();
    let input = write(
        dir.path(),
        "raw.csv",
        "name,sex,age,year,kind,location,native_born\n\
         Elizabeth,F,3,1880,census,,\n\
         Mary A,M,3,1880,census,,\n\
         Christina,F,,1880,marriage,,\n\
         J,M,3,1880,census,,\n\
         Mrs,F,40,1880,census,,\n\
         Widow,F,60,1880,census,,\n\
         Ann,Q,3,1880,census,,\n",
    );
    let rejects = dir.path().join("rejects.csv");
    let out_path = dir.path().join("clean.csv");
    let out = onomast(&[
        "ingest",
        "-i",
        &input,
        "--rejects",
        rejects.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(&out_path).unwrap(),
        "name,sex,age,year,kind,location,native_born\n\
         ELIZABET,F,3,1880,census,,\n\
         MARY,F,3,1880,census,,\n\
         CHRISTIN,F,,1880,marriage,,\n"
    );
    let rejects = std::fs::read_to_string(rejects).unwrap();
    let reasons: Vec<&str> = rejects
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap())
        .collect();
    assert_eq!(reasons, ["bad_sex", "single_letter", "generic", "generic"]);
}

#[test]
fn markdown_mirrors_csv_rows() {
    let out = onomast(&["--format", "markdown", "samplevar"]);
    let text = stdout(&out);
    assert!(text.starts_with("| Name Probability | Sample Size |"));
    assert!(text.contains("| 1.5% | 100,000 | 1,500 | 38 | 0.0% |"));
    assert_eq!(text.lines().count(), 14);
}
