use fuzzyseg_core::io::{decode_pgm, encode_pgm, labels_from_rendering, read_pgm, render_labels, write_label_map, write_pgm};
use fuzzyseg_core::{
    add_gaussian_noise, align_labels, compute_histogram, make_phantom, run_fcm, run_isfcm,
    run_sweep, segment, segmentation_accuracy, FcmConfig, GrayImage, Init, IsfcmConfig, Layout,
    Method, NoiseSpec, RunConfig, SweepConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn every_layout_is_recovered_without_noise() {
    for layout in [Layout::Halves, Layout::Stripes, Layout::Disks] {
        let p = make_phantom(48, 48, layout, &[30, 110, 200]).unwrap();
        for method in [Method::Fcm, Method::Isfcm] {
            let seg = segment(&p.image, &RunConfig::new(method, 3)).unwrap();
            let aligned = align_labels(&seg.labels, &p.truth, 3).unwrap();
            let acc = segmentation_accuracy(&aligned, &p.truth).unwrap();
            assert_eq!(acc, 100.0, "{layout} {method}");
        }
    }
}

#[test]
fn mean_fcm_accuracy_drops_with_noise() {
    let p = make_phantom(64, 64, Layout::Halves, &[80, 170]).unwrap();
    let seeds: Vec<u64> = (1..=10).collect();
    let report = run_sweep(&p, &[Method::Fcm], &[0.0, 15.0], &seeds, &SweepConfig::new(2)).unwrap();
    let clean = report.mean_accuracy(Method::Fcm, 0.0).unwrap();
    let noisy = report.mean_accuracy(Method::Fcm, 15.0).unwrap();
    assert!(noisy <= clean);
}

#[test]
fn spatial_engine_cleans_noise_on_disks() {
    let p = make_phantom(96, 96, Layout::Disks, &[40, 120, 200]).unwrap();
    let noisy = add_gaussian_noise(&p.image, &NoiseSpec::new(15.0, 4).unwrap()).unwrap();
    let score = |labels| {
        segmentation_accuracy(&align_labels(labels, &p.truth, 3).unwrap(), &p.truth).unwrap()
    };
    let plain = run_fcm(&noisy, &FcmConfig::with_clusters(3), &Init::Auto).unwrap();
    let plain_labels = fuzzyseg_core::defuzzify(&plain.memberships, noisy.dims()).unwrap();
    let spatial = run_isfcm(&noisy, &IsfcmConfig::with_clusters(3)).unwrap();
    assert!(score(&spatial.labels) > score(&plain_labels));
}

#[test]
fn pgm_files_round_trip_for_random_images() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for i in 0..100 {
        let (w, h) = (rng.random_range(1..50), rng.random_range(1..50));
        let img = GrayImage::new(w, h, (0..w * h).map(|_| rng.random()).collect()).unwrap();
        let path = dir.path().join(format!("{i}.pgm"));
        write_pgm(&img, &path).unwrap();
        assert_eq!(read_pgm(&path).unwrap().pixels(), img.pixels());
    }
}

#[test]
fn plain_pgm_matches_binary() {
    let img = GrayImage::from_fn(5, 4, |x, y| (x * 40 + y * 7) as u8).unwrap();
    let mut plain = format!("P2\n# plain\n{} {}\n255\n", img.width(), img.height());
    for row in img.pixels().chunks(img.width()) {
        let line: Vec<String> = row.iter().map(u8::to_string).collect();
        plain.push_str(&line.join(" "));
        plain.push('\n');
    }
    assert_eq!(decode_pgm(plain.as_bytes()).unwrap(), decode_pgm(&encode_pgm(&img)).unwrap());
}

#[test]
fn label_maps_survive_rendering() {
    let dir = tempfile::tempdir().unwrap();
    let p = make_phantom(40, 30, Layout::Stripes, &[10, 60, 110, 160, 210]).unwrap();
    let path = dir.path().join("truth.pgm");
    write_label_map(&p.truth, 5, &path).unwrap();
    let back = labels_from_rendering(&read_pgm(&path).unwrap(), 5).unwrap();
    assert_eq!(back, p.truth);
    let rendered = render_labels(&p.truth, 5).unwrap();
    assert_eq!(compute_histogram(&rendered).nonzero_levels(), 5);
}
