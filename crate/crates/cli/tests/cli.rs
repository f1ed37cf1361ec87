use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const SAMPLE: &str = "uma noite destas vindo\nda cidade para o engenho\n\n  novo coração no trem\n";

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_braillecheck"));
    cmd.env_remove("BRAILLECHECK_DICT");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: TempDir::new().unwrap(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, content: &str) -> PathBuf {
        let path = self.path(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).unwrap();
        }
        fs::write(&path, content).unwrap();
        path
    }

    fn small_dict(&self) -> PathBuf {
        self.write(
            "dict.txt",
            "casa 100\nbala 150\nmala 50\nmesa 40\nnoite 30\ncidade 20\numa 200\nda 150\npara 120\no 300\n",
        )
    }
}

#[test]
fn render_then_transcribe_reproduces_text() {
    let ws = Workspace::new();
    let text = ws.write("sample.txt", SAMPLE);
    let img = ws.path("page.pgm");
    let out = ws.path("out.txt");
    assert_eq!(code(&run(&["render", p(&text), "--out", p(&img)])), 0);
    let result = run(&["transcribe", p(&img), "--out", p(&out)]);
    assert_eq!(code(&result), 0, "{}", String::from_utf8_lossy(&result.stderr));
    assert_eq!(fs::read_to_string(&out).unwrap(), SAMPLE);
    assert!(String::from_utf8_lossy(&result.stderr).contains("0 unreadable"));
}

#[test]
fn blurred_render_is_a_valid_page() {
    let ws = Workspace::new();
    let text = ws.write("sample.txt", SAMPLE);
    let img = ws.path("page.pgm");
    let blurred = ws.path("blurred.pgm");
    assert_eq!(code(&run(&["render", p(&text), "--out", p(&img)])), 0);
    assert_eq!(code(&run(&["corrupt", p(&img), "--noise", "blur:3.0", "--out", p(&blurred)])), 0);
    let bytes = fs::read(&blurred).unwrap();
    assert!(bytes.starts_with(b"P5"));
    let result = run(&["transcribe", p(&blurred)]);
    assert_eq!(code(&result), 0);
    assert_eq!(String::from_utf8_lossy(&result.stdout), SAMPLE);
}

#[test]
fn transcribe_failures() {
    let ws = Workspace::new();
    let missing = run(&["transcribe", p(&ws.path("nope.pgm"))]);
    assert_eq!(code(&missing), 1);
    assert!(!missing.stderr.is_empty());

    let empty = ws.write("empty.txt", "");
    let blank = ws.path("blank.pgm");
    assert_eq!(code(&run(&["render", p(&empty), "--out", p(&blank)])), 0);
    assert_eq!(code(&run(&["transcribe", p(&blank)])), 2);
}

#[test]
fn corrupt_parameters() {
    let ws = Workspace::new();
    let text = ws.write("sample.txt", "casa\n");
    let img = ws.path("page.pgm");
    assert_eq!(code(&run(&["render", p(&text), "--out", p(&img)])), 0);

    let same = ws.path("same.pgm");
    assert_eq!(code(&run(&["corrupt", p(&img), "--noise", "spread:0", "--out", p(&same)])), 0);
    assert_eq!(fs::read(&img).unwrap(), fs::read(&same).unwrap());

    for bad in ["blur:0", "blur:-1", "spread:-3", "canvas:2"] {
        let out = run(&["corrupt", p(&img), "--noise", bad, "--out", p(&ws.path("x.pgm"))]);
        assert_eq!(code(&out), 3, "{bad}");
    }

    let a = ws.path("a.pgm");
    let b = ws.path("b.pgm");
    for path in [&a, &b] {
        let out = run(&["corrupt", p(&img), "--noise", "spread:10", "--seed", "5", "--out", p(path)]);
        assert_eq!(code(&out), 0);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn render_rejects_bad_input() {
    let ws = Workspace::new();
    let digits = ws.write("digits.txt", "casa 7\n");
    assert_eq!(code(&run(&["render", p(&digits), "--out", p(&ws.path("x.pgm"))])), 3);
    let long = ws.write("long.txt", "a b c d e f\n");
    let out = run(&["render", p(&long), "--max-cells", "5", "--out", p(&ws.path("x.pgm"))]);
    assert_eq!(code(&out), 3);
    let wrapped = run(&["render", p(&long), "--wrap", "--max-cells", "5", "--out", p(&ws.path("x.pgm"))]);
    assert_eq!(code(&wrapped), 0);
}

#[test]
fn revise_methods() {
    let ws = Workspace::new();
    let dict = ws.small_dict();

    let clean = ws.write("clean.txt", "casa mesa\nnoite\n");
    let out = run(&["revise", p(&clean), "--dict", p(&dict)]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "casa mesa\nnoite\n");
    assert!(String::from_utf8_lossy(&out.stderr).contains("changed 0 of 3"));

    // "cala" is one dot from "mala" and two from "bala"; both are one edit away
    let noisy = ws.write("noisy.txt", "cala\n");
    let ours = run(&["revise", p(&noisy), "--dict", p(&dict), "--method", "ours"]);
    assert_eq!(String::from_utf8_lossy(&ours.stdout), "mala\n");
    let baseline = run(&["revise", p(&noisy), "--dict", p(&dict), "--method", "baseline"]);
    assert_eq!(String::from_utf8_lossy(&baseline.stdout), "bala\n");

    let env = bin()
        .args(["revise", p(&noisy)])
        .env("BRAILLECHECK_DICT", &dict)
        .output()
        .unwrap();
    assert_eq!(String::from_utf8_lossy(&env.stdout), "mala\n");

    assert_eq!(code(&run(&["revise", p(&ws.path("missing.txt")), "--dict", p(&dict)])), 1);
    assert_eq!(code(&run(&["revise", p(&noisy), "--dict", p(&ws.path("none.txt"))])), 1);
    assert_eq!(code(&run(&["revise", p(&noisy), "--method", "fancy"])), 3);
}

#[test]
fn config_file_sets_defaults() {
    let ws = Workspace::new();
    let text = ws.write("sample.txt", "casa\n");
    let cfg = ws.write("braille.conf", "# small page\nmargin = 10\n");
    let img = ws.path("page.pgm");
    assert_eq!(code(&run(&["--config", p(&cfg), "render", p(&text), "--out", p(&img)])), 0);
    let small = pgm_size(&img);

    let flag = ws.path("flag.pgm");
    let out = run(&["--config", p(&cfg), "render", p(&text), "--margin", "20", "--out", p(&flag)]);
    assert_eq!(code(&out), 0);
    let large = pgm_size(&flag);
    assert_eq!((large.0 - small.0, large.1 - small.1), (20, 20));

    let default = ws.path("default.pgm");
    assert_eq!(code(&run(&["render", p(&text), "--out", p(&default)])), 0);
    assert!(pgm_size(&default).0 > large.0);

    let bad = ws.write("bad.conf", "colour = red\n");
    assert_eq!(code(&run(&["--config", p(&bad), "render", p(&text), "--out", p(&img)])), 3);
}

fn pgm_size(path: &Path) -> (usize, usize) {
    let bytes = fs::read(path).unwrap();
    let header = String::from_utf8_lossy(&bytes[..32]).to_string();
    let mut fields = header.split_whitespace().skip(1);
    let w = fields.next().unwrap().parse().unwrap();
    let h = fields.next().unwrap().parse().unwrap();
    (w, h)
}

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/corpus")
}

#[test]
fn experiment_a_single_percent_is_deterministic() {
    let ws = Workspace::new();
    let csv1 = ws.path("a1.csv");
    let csv2 = ws.path("a2.csv");
    for csv in [&csv1, &csv2] {
        let out = run(&["experiment", "a", p(&corpus_dir()), "--percents", "2.5", "--seed", "11", "--out", p(csv)]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        assert!(String::from_utf8_lossy(&out.stdout).contains("seed 11"));
    }
    let report = fs::read_to_string(&csv1).unwrap();
    let lines: Vec<&str> = report.lines().collect();
    assert_eq!(lines.len(), 3, "{report}");
    assert!(lines[1].starts_with("a,2.5%,ours,11,"));
    assert!(lines[2].starts_with("a,2.5%,baseline,11,"));
    assert_eq!(fs::read(&csv1).unwrap(), fs::read(&csv2).unwrap());
}

#[test]
fn experiment_failures() {
    let ws = Workspace::new();
    let empty = ws.path("empty");
    fs::create_dir_all(&empty).unwrap();
    assert_eq!(code(&run(&["experiment", "a", p(&empty)])), 1);
    assert_eq!(code(&run(&["experiment", "a", p(&ws.path("missing"))])), 1);
    assert_eq!(code(&run(&["experiment", "a", p(&corpus_dir()), "--percents", "0"])), 3);
}

#[test]
fn experiment_b_default_conditions() {
    let ws = Workspace::new();
    ws.write("corpus/short.txt", "Uma noite destas, vindo da cidade para o Engenho Novo.");
    let dict = ws.small_dict();
    let csv = ws.path("b.csv");
    let out = run(&["experiment", "b", p(&ws.path("corpus")), "--dict", p(&dict), "--out", p(&csv)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = fs::read_to_string(&csv).unwrap();
    let conditions: Vec<String> = report
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().to_string())
        .collect();
    let expected = ["plain", "blur 3", "blur 5", "spread 10", "spread 20"];
    assert_eq!(conditions.len(), 10);
    for (pair, name) in conditions.chunks(2).zip(expected) {
        assert_eq!(pair, [name, name]);
    }
}

/// Hit rate column of the `ours` row for `condition`.
fn ours_hit_rate(csv: &str, condition: &str) -> f64 {
    csv.lines()
        .map(|l| l.split(',').collect::<Vec<_>>())
        .find(|f| f[1] == condition && f[2] == "ours")
        .map(|f| f[6].parse().unwrap())
        .unwrap()
}

#[test]
fn chained_commands_match_experiment() {
    let ws = Workspace::new();
    let text = "Encontrei no trem da Central um rapaz aqui do bairro, que eu conheço de vista e de chapéu. \
                Cumprimentou-me, sentou-se ao pé de mim, falou da lua e dos ministros.";
    let doc = ws.write("corpus/doc.txt", text);
    let img = ws.path("page.pgm");
    let noisy = ws.path("noisy.pgm");
    let recognized = ws.path("recognized.txt");
    let revised = ws.path("revised.txt");

    assert_eq!(code(&run(&["render", p(&doc), "--wrap", "--out", p(&img)])), 0);
    assert_eq!(code(&run(&["corrupt", p(&img), "--noise", "spread:20", "--seed", "9", "--out", p(&noisy)])), 0);
    assert_eq!(code(&run(&["transcribe", p(&noisy), "--out", p(&recognized)])), 0);
    assert_eq!(code(&run(&["revise", p(&recognized), "--out", p(&revised)])), 0);

    let csv = ws.path("b.csv");
    let out = run(&[
        "experiment",
        "b",
        p(&ws.path("corpus")),
        "--noise",
        "spread:20",
        "--seed",
        "9",
        "--out",
        p(&csv),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let expected = ours_hit_rate(&fs::read_to_string(&csv).unwrap(), "spread 20");

    let truth: Vec<String> = text
        .split_whitespace()
        .map(|w| {
            w.to_lowercase()
                .trim_matches(|c: char| !c.is_alphanumeric() && c != '-')
                .to_string()
        })
        .collect();
    let output = fs::read_to_string(&revised).unwrap();
    let words: Vec<&str> = output.split_whitespace().collect();
    assert_eq!(words.len(), truth.len(), "{output}");
    let hits = words.iter().zip(&truth).filter(|(a, b)| **a == b.as_str()).count();
    let rate = 100.0 * hits as f64 / truth.len() as f64;
    assert!((rate - expected).abs() < 1e-3, "chained {rate} vs experiment {expected}");
}
