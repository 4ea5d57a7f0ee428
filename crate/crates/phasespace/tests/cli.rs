use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn phasespace(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_phasespace"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(dir.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn wigner_writes_grid_heatmap_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("w");
    let o = phasespace(&["wigner", "--K", "0.9", "--nq", "4", "--t", "5", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let m = manifest(&out);
    assert!((m["results"]["sum"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((m["results"]["sum_sq_times_2N"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let files: Vec<&str> = m["outputs"].as_array().unwrap().iter().map(|f| f["path"].as_str().unwrap()).collect();
    assert_eq!(files, ["wigner.csv", "wigner.pgm"]);
    let (rows, cols, values) = phasespace::imageio::read_grid_csv(out.join("wigner.csv")).unwrap();
    assert_eq!((rows, cols), (32, 32));
    assert!((values.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    let pgm = phasespace::imageio::load_pgm(out.join("wigner.pgm")).unwrap();
    assert_eq!((pgm.image.width(), pgm.image.height()), (32, 32));
}

#[test]
fn pipeline_flag_agrees_with_direct() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    let common = ["wigner", "--K", "2", "--nq", "4", "--t", "3", "--out"];
    let mut args = common.to_vec();
    args.push(a.to_str().unwrap());
    assert!(phasespace(&args).status.success());
    args.pop();
    args.extend([b.to_str().unwrap(), "--pipeline"]);
    assert!(phasespace(&args).status.success());
    let (_, _, va) = phasespace::imageio::read_grid_csv(a.join("wigner.csv")).unwrap();
    let (_, _, vb) = phasespace::imageio::read_grid_csv(b.join("wigner.csv")).unwrap();
    for (x, y) in va.iter().zip(&vb) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn coarse_sampling_counts_add_up() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("c");
    let o = phasespace(&[
        "wigner", "--K", "0.5", "--nq", "4", "--t", "2", "--nf", "2", "--shots", "500", "--seed", "3", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut r = csv::Reader::from_path(out.join("coarse_counts.csv")).unwrap();
    let total: u64 = r.records().map(|rec| rec.unwrap()[1].parse::<u64>().unwrap()).sum();
    assert_eq!(total, 500);
}

#[test]
fn scan_husimi_and_image() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("s");
    let o = phasespace(&["scan", "husimi", "--K", "0.5,2", "--nq", "4:8", "--t", "5", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(out.join("scan.csv")).unwrap();
    // even qubit counts only: 4, 6, 8 for each K
    assert_eq!(text.lines().count(), 1 + 6);
    assert_eq!(manifest(&out)["results"]["fits"].as_array().unwrap().len(), 2);

    let img = tmp.path().join("i");
    let o = phasespace(&["scan", "image", "--image", "spots", "--nq", "4:6", "--out", img.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn reconstruct_from_pgm_file() {
    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("in.pgm");
    let image = phasespace::phasespace_core::image::synthetic_image(
        phasespace::phasespace_core::image::Synthetic::Texture,
        32,
        5,
    )
    .unwrap();
    phasespace::imageio::save_pgm(&image, &src).unwrap();
    for method in ["topk", "montecarlo"] {
        let out = tmp.path().join(method);
        let o = phasespace(&[
            "reconstruct", "--image", src.to_str().unwrap(), "--method", method, "--k", "200", "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(manifest(&out)["results"]["psnr"].as_f64().unwrap().is_finite());
    }
}

#[test]
fn amplify_preserves_ratios() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("a");
    let o = phasespace(&[
        "amplify", "--K", "1.5", "--nq", "4", "--t", "4", "--distribution", "husimi", "--region", "0:1,0:3", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = &manifest(&out)["results"];
    assert!(r["max_relative_ratio_error"].as_f64().unwrap() < 1e-10);
    let (f, c) = (r["final_weight"].as_f64().unwrap(), r["closed_form_weight"].as_f64().unwrap());
    assert!((f - c).abs() < 1e-10);
}

#[test]
fn classical_density() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("c");
    let o = phasespace(&[
        "classical", "--K", "0.9", "--t", "20", "--seed", "7", "--ensemble", "5000", "--bins", "32", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!((manifest(&out)["results"]["total"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn errors_map_to_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().to_str().unwrap();
    let o = phasespace(&["husimi", "--K", "1", "--nq", "5", "--t", "1", "--out", dir]);
    assert_eq!(o.status.code(), Some(3), "odd qubit count is rejected");
    assert!(String::from_utf8_lossy(&o.stderr).contains("error[invalid-parameter]"));

    let bad = tmp.path().join("bad.pgm");
    std::fs::write(&bad, b"P5\n4 4\n255\nxx").unwrap();
    let o = phasespace(&["reconstruct", "--image", bad.to_str().unwrap(), "--method", "topk", "--k", "3", "--out", dir]);
    assert_eq!(o.status.code(), Some(11));
    assert!(String::from_utf8_lossy(&o.stderr).contains("truncated payload"));

    let o = phasespace(&["amplify", "--K", "1", "--nq", "4", "--t", "1", "--region", "nope", "--out", dir]);
    assert_eq!(o.status.code(), Some(2));
    let o = phasespace(&["scan", "wigner", "--nq", "4:6", "--out", dir]);
    assert_eq!(o.status.code(), Some(2), "physics parameters have no defaults");
    let o = phasespace(&["wigner", "--nq", "4"]);
    assert_eq!(o.status.code(), Some(2), "clap reports missing flags as usage errors");
}
