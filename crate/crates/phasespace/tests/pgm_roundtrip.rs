use phasespace::imageio::{decode_pgm, encode_pgm, load_pgm, render_heatmap, save_pgm_with_maxval};
use phasespace::phasespace_core::image::{synthetic_image, GrayImage, Synthetic};
use proptest::prelude::*;

proptest! {
    #[test]
    fn binary_round_trip(w in 1usize..20, h in 1usize..20, maxval in 1u8..=255, seed: u64) {
        let mut state = seed;
        let pixels: Vec<u8> = (0..w * h)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((state >> 33) % (maxval as u64 + 1)) as u8
            })
            .collect();
        let image = GrayImage::new(w, h, pixels).unwrap();
        let back = decode_pgm(&encode_pgm(&image, maxval)).unwrap();
        prop_assert_eq!(back.image, image);
        prop_assert_eq!(back.maxval, maxval);
    }
}

#[test]
fn ascii_and_binary_agree() {
    let image = synthetic_image(Synthetic::Fractal, 8, 2).unwrap();
    let mut ascii = format!("P2\n# ascii copy\n{} {}\n255\n", image.width(), image.height());
    for row in image.pixels().chunks(image.width()) {
        let line: Vec<String> = row.iter().map(|p| p.to_string()).collect();
        ascii.push_str(&line.join(" "));
        ascii.push('\n');
    }
    assert_eq!(decode_pgm(ascii.as_bytes()).unwrap().image, image);
}

#[test]
fn files_round_trip_and_report_paths() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("x.pgm");
    let image = synthetic_image(Synthetic::Spots, 16, 9).unwrap();
    save_pgm_with_maxval(&image, 255, &path).unwrap();
    assert_eq!(load_pgm(&path).unwrap().image, image);

    let missing = tmp.path().join("missing.pgm");
    let err = load_pgm(&missing).unwrap_err();
    assert_eq!(err.category(), "io");
    assert!(err.to_string().contains("missing.pgm"));
}

#[test]
fn signed_heatmap_centers_zero() {
    let tmp = tempfile::tempdir().unwrap();
    let img = render_heatmap(&[-1.0, 0.0, 0.5, 1.0], 2, 2, true, tmp.path().join("h.pgm")).unwrap();
    assert_eq!(img.pixels()[1], 128);
    assert!(img.pixels()[0] < 10 && img.pixels()[3] > 250);
}
