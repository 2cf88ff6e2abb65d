//! Golden transcripts for the command-line tool, shared by the golden and
//! acceptance test targets.

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct GoldenCase {
    pub name: &'static str,
    pub args: &'static [&'static str],
}

const fn case(name: &'static str, args: &'static [&'static str]) -> GoldenCase {
    GoldenCase { name, args }
}

pub const CASES: &[GoldenCase] = &[
    case("measure_worked", &["measure", "(0,1] U (2,5/2]"]),
    case("measure_json", &["--json", "measure", "(-inf,0] U (1,2]"]),
    case("measure_empty", &["measure", "(1,0]"]),
    case("measure_lower_inf", &["measure", "(inf,3]"]),
    case("measure_decimal", &["measure", "(0,0.5]"]),
    case("integrate_signed", &["integrate", "3*1[(0,1]] - 2*1[(2,3]]", "--domain", "(0,10]"]),
    case("integrate_restricted", &["integrate", "3*1[(0,1]]", "--domain", "(0,1/2]"]),
    case("integrate_point_masses", &["integrate", "4*1[(0,10]]", "--measure", "points(1:2, 5:3)"]),
    case("integrate_json", &["--json", "integrate", "1*1[(0,inf]]", "--domain", "(0,1]"]),
    case("integrate_not_integrable", &["integrate", "1*1[(0,inf]] - 1*1[(-inf,0]]"]),
    case("integrate_missing_coefficient", &["integrate", "1[(0,1]]"]),
    case("integrate_mixed_dimensions", &["integrate", "1*1[(0,1]] + 1*1[(0,1] x (0,1]]"]),
    case("decomp_merge", &["decomp", "(0,1] U (1,2] U (3,4]"]),
    case("decomp_json", &["--json", "decomp", "(-inf,-1] U (5,inf]"]),
    case("check_semiring_worked", &["check-structure", "--kind", "semiring", "--universe", "a,b", "--family", "{};{a};{a,b}"]),
    case("check_sigma_ok", &["check-structure", "--kind", "sigma-algebra", "--universe", "a,b", "--family", "{};{a};{b};{a,b}"]),
    case("check_semiring_file", &["check-structure", "--kind", "semiring", "--universe", "a,b,c", "--family", "@fixtures/chain_family.txt"]),
    case("check_json", &["--json", "check-structure", "--kind", "ring", "--universe", "a,b", "--family", "{};{a};{b}"]),
    case("check_unknown_kind", &["check-structure", "--kind", "lattice", "--universe", "a", "--family", "{}"]),
    case("generate_sigma", &["generate", "--kind", "sigma_algebra", "--universe", "a,b,c", "--family", "{a}"]),
    case("generate_dynkin", &["generate", "--kind", "dynkin", "--universe", "a,b,c,d", "--family", "{a,b};{b,c}"]),
    case("generate_json", &["--json", "generate", "--kind", "ring", "--universe", "a,b,c", "--family", "{a,b};{b,c}"]),
    case("outer_weights", &["outer", "--universe", "a,b,c", "--family", "{};{a,b};{c}", "--weights", "fixtures/abc_weights.txt"]),
    case("outer_table_json", &["--json", "outer", "--universe", "a,b", "--table", "fixtures/one_one_one.txt"]),
    case("caratheodory_worked", &["caratheodory", "--universe", "a,b", "--table", "fixtures/one_one_one.txt"]),
    case("caratheodory_weights", &["caratheodory", "--universe", "a,b,c", "--family", "@fixtures/chain_family.txt", "--weights", "fixtures/abc_weights.txt"]),
    case("caratheodory_json", &["--json", "caratheodory", "--universe", "a,b", "--table", "fixtures/one_one_one.txt"]),
    case("caratheodory_bad_outer", &["caratheodory", "--universe", "a,b", "--table", "fixtures/not_subadditive.txt"]),
    case("caratheodory_missing_file", &["caratheodory", "--universe", "a,b", "--table", "fixtures/absent.txt"]),
    case("fubini_rectangle", &["fubini", "2*1[(0,1] x (0,3]]"]),
    case("fubini_signed", &["fubini", "2*1[(0,1] x (0,3]] - 1*1[(0,2] x (1,2]]", "--y-measure", "points(3/2:4)"]),
    case("fubini_json", &["--json", "fubini", "1*1[(0,1] x (0,1]] - 1*1[(1,2] x (0,2]]"]),
    case("fubini_one_dimensional", &["fubini", "2*1[(0,1]]"]),
    case("product_union", &["product", "(0,1] x (0,3]; (2,3] x (0,1]"]),
    case("product_overlap_points", &["product", "(0,2] x (0,2]; (1,3] x (1,3]", "--x-measure", "points(1/2:5, 5/2:1)"]),
    case("product_json", &["--json", "product", "(0,1] x (0,inf]"]),
    case("usage_error", &["frobnicate"]),
];

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn quote(arg: &str) -> String {
    let plain = arg
        .chars()
        .all(|c| c.is_ascii_alphanumeric() || "-_./,:".contains(c));
    if plain {
        arg.to_string()
    } else {
        format!("'{arg}'")
    }
}

/// Runs the binary from the `tests` directory and renders a transcript.
pub fn transcript(case: &GoldenCase) -> String {
    let tests_dir = manifest_dir().join("tests");
    let output = Command::new(env!("CARGO_BIN_EXE_measurekit"))
        .args(case.args)
        .current_dir(&tests_dir)
        .output()
        .expect("binary runs");
    let shown: Vec<String> = case.args.iter().map(|a| quote(a)).collect();
    format!(
        "$ measurekit {}\nexit: {}\n--- stdout\n{}--- stderr\n{}",
        shown.join(" "),
        output.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr),
    )
}

pub fn golden_path(case: &GoldenCase) -> PathBuf {
    manifest_dir().join("tests/golden").join(format!("{}.txt", case.name))
}

/// Compares against the stored transcript; with `UPDATE_GOLDEN=1` rewrites it.
pub fn check(case: &GoldenCase) -> Result<(), String> {
    let actual = transcript(case);
    let path = golden_path(case);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &actual).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let expected = read(&path)?;
    if expected == actual {
        Ok(())
    } else {
        Err(format!("{}: transcript differs\n--- expected\n{expected}--- actual\n{actual}", case.name))
    }
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}
