use serde_json::Value;
use std::io::Write;
use std::process::{Command, Output, Stdio};

fn umbra(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_umbra"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn umbra");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(s) = stdin {
            pipe.write_all(s.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn error_code(out: &Output) -> String {
    let err: Value = serde_json::from_slice(out.stderr.trim_ascii()).expect("error JSON on stderr");
    err["error"].as_str().unwrap().to_string()
}

#[test]
fn umbral_faddeeva_series() {
    let out = umbra(
        &[
            "umbral", "--f", "expi", "--mu", "1", "--ground", "lambda", "--N", "64",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["series"]["truncation"], 64);
    let c1 = &v["series"]["coeffs"][1];
    assert_eq!(c1[0].as_f64().unwrap(), 0.0);
    assert!((c1[1].as_f64().unwrap() - 2.0 / std::f64::consts::PI.sqrt()).abs() < 1e-15);
    assert_eq!(v["gevrey"]["verdict"], "Convergent");
}

#[test]
fn series_json_round_trips_bit_exactly() {
    let out = umbra(
        &[
            "umbral", "--f", "expi", "--mu", "1", "--ground", "lambda", "--N", "40",
        ],
        None,
    );
    let series = json(&out)["series"].clone();
    let text = serde_json::to_string(&series).unwrap();
    let parsed: umbra_core::series::FormalSeries = serde_json::from_str(&text).unwrap();
    let reparsed: Value = serde_json::to_value(&parsed).unwrap();
    assert_eq!(reparsed, series);
    for (r, c) in series["coeffs"].as_array().unwrap().iter().enumerate() {
        assert_eq!(
            c[1].as_f64().unwrap().to_bits(),
            parsed.coeff(r).im.to_bits()
        );
    }

    // Feeding it back through a subcommand reproduces the same bits.
    let borel_once = umbra(&["borel", "--k", "1"], Some(&text));
    let again = umbra(&["borel", "--k", "1"], Some(&text));
    assert_eq!(borel_once.stdout, again.stdout);
}

#[test]
fn classify_reports_the_level() {
    let coeffs: Vec<[f64; 2]> = (0..=60u32)
        .map(|r| {
            [
                (1..=r).map(f64::from).product::<f64>() * if r % 2 == 0 { 1.0 } else { -1.0 },
                0.0,
            ]
        })
        .collect();
    let input = serde_json::json!({"truncation": 60, "coeffs": coeffs}).to_string();
    let v = json(&umbra(&["classify"], Some(&input)));
    for key in ["sigma", "k", "C", "A", "residual", "verdict"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert!((v["sigma"].as_f64().unwrap() - 1.0).abs() < 0.1);
    assert_eq!(v["verdict"], "Divergent");
}

#[test]
fn resum_of_convergent_series_warns_and_sums_directly() {
    let input = r#"{"truncation": 30, "coeffs": [[1,0],[-1,0],[0.5,0],[-0.16666666666666666,0],[0.041666666666666664,0],[-0.008333333333333333,0],[0.001388888888888889,0],[-0.0001984126984126984,0],[2.48015873015873e-5,0],[-2.7557319223985893e-6,0],[2.755731922398589e-7,0],[-2.505210838544172e-8,0],[2.08767569878681e-9,0],[-1.6059043836821613e-10,0],[1.1470745597729725e-11,0],[-7.647163731819816e-13,0],[4.779477332387385e-14,0],[-2.8114572543455206e-15,0],[1.5619206968586225e-16,0],[-8.22063524662433e-18,0],[4.110317623312165e-19,0],[-1.9572941063391263e-20,0],[8.896791392450574e-22,0],[-3.8681701706306835e-23,0],[1.6117375710961184e-24,0],[-6.446950284384474e-26,0],[2.4795962632247976e-27,0],[-9.183689863795546e-29,0],[3.279889237069838e-30,0],[-1.1309962886447716e-31,0],[3.7699876288159054e-33,0]]}"#;
    let out = umbra(&["resum", "--k", "1", "--t", "1"], Some(input));
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let v = json(&out);
    assert!((v["samples"][0][2].as_f64().unwrap() - (-1f64).exp()).abs() < 1e-15);

    let forced = json(&umbra(
        &["resum", "--k", "1", "--t", "1", "--force"],
        Some(input),
    ));
    assert!((forced["samples"][0][2].as_f64().unwrap() - (-1f64).exp()).abs() < 1e-10);
    assert!(forced.get("poles").is_some());
}

#[test]
fn resum_example8_hits_pole_on_ray() {
    let out = umbra(
        &[
            "umbral", "--f", "geom-alt", "--mu", "1", "--ground", "lambda", "--N", "60",
        ],
        None,
    );
    let series = json(&out)["series"].to_string();
    let res = umbra(
        &["resum", "--k", "2", "--order", "20", "--t", "0.1"],
        Some(&series),
    );
    assert_eq!(res.status.code(), Some(2));
    assert_eq!(error_code(&res), "PoleOnRay");
    assert!(res.stdout.is_empty());
}

#[test]
fn gaussft_inputs() {
    let v = json(&umbra(
        &["gaussft", "--input", "gaussian:2", "--k", "1"],
        None,
    ));
    let want = (std::f64::consts::PI / 3.0).sqrt();
    assert!((v["value"][0].as_f64().unwrap() - want).abs() < 1e-7);

    let div = umbra(&["gaussft", "--input", "abs-exp", "--k", "1"], None);
    assert_eq!(div.status.code(), Some(2));
    assert_eq!(error_code(&div), "DivergentSeries");

    let v = json(&umbra(
        &["gaussft", "--input", "abs-exp", "--k", "1", "--resum"],
        None,
    ));
    assert_eq!(v["verdict"]["class"], "divergent");
    // sqrt(pi) e^{1/4} erfc(1/2)
    let want = 1.0912827215300941;
    assert!((v["value"][0].as_f64().unwrap() - want).abs() < 1e-6 * want);

    let v = json(&umbra(
        &["gaussft", "--input", "hermite:1", "--k", "1"],
        None,
    ));
    assert!((v["value"][1].as_f64().unwrap() + 4.0 * 2f64.sqrt() / 3.0).abs() < 1e-7);
}

#[test]
fn laplace_of_a_polynomial() {
    let input = r#"{"truncation": 2, "coeffs": [[1,0],[-1,0],[0.5,0]]}"#;
    let v = json(&umbra(
        &["laplace", "--k", "1", "--t", "0.5", "--t", "-0.3,0.2"],
        Some(input),
    ));
    // L_1[1 - z + z^2/2](t) = t - t^2 + t^3
    let t = umbra_core::Complex64::new(-0.3, 0.2);
    let want = t - t * t + t * t * t;
    let s = &v["samples"][1];
    assert!((s[2].as_f64().unwrap() - want.re).abs() < 1e-12);
    assert!((s[3].as_f64().unwrap() - want.im).abs() < 1e-12);
    assert!((v["samples"][0][2].as_f64().unwrap() - 0.375).abs() < 1e-12);
}

#[test]
fn input_errors_exit_with_one() {
    let bad_json = umbra(&["classify"], Some("{not json"));
    assert_eq!(bad_json.status.code(), Some(1));
    assert_eq!(error_code(&bad_json), "ParseError");

    let mismatch = umbra(
        &["classify"],
        Some(r#"{"truncation": 3, "coeffs": [[1,0]]}"#),
    );
    assert_eq!(mismatch.status.code(), Some(1));

    let small_n = umbra(
        &[
            "umbral", "--f", "exp", "--mu", "1", "--ground", "lambda", "--N", "3",
        ],
        None,
    );
    assert_eq!(small_n.status.code(), Some(1));
    assert_eq!(error_code(&small_n), "InvalidArgument");

    let missing = umbra(
        &[
            "umbral",
            "--f",
            "custom-json",
            "--mu",
            "1",
            "--ground",
            "lambda",
            "-i",
            "/nonexistent/x.json",
        ],
        None,
    );
    assert_eq!(missing.status.code(), Some(1));
    assert_eq!(error_code(&missing), "IoError");

    assert_eq!(umbra(&["frobnicate"], None).status.code(), Some(1));
    assert_eq!(umbra(&["--help"], None).status.code(), Some(0));
}

#[test]
fn domain_errors_exit_with_two() {
    let out = umbra(
        &["umbral", "--f", "exp", "--mu", "-1", "--ground", "lambda"],
        None,
    );
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_code(&out), "NegativeMu");
}

#[test]
fn output_file_option() {
    let dir = std::env::temp_dir().join(format!("umbra-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("series.json");
    let out = umbra(
        &[
            "umbral",
            "--f",
            "exp",
            "--mu",
            "1",
            "--ground",
            "phi:1,1",
            "--N",
            "10",
            "-o",
            path.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["series"]["truncation"], 10);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn verify_is_deterministic() {
    let a = umbra(&["verify"], None);
    let b = umbra(&["verify"], None);
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stderr)
    );
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert!(v["checks"].as_array().unwrap().len() >= 12);
    assert!(v["passed"].as_u64().unwrap() >= 12);
}
