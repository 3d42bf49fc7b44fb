use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fuzzyseg_core::{
    add_gaussian_noise, compute_histogram, expand_to_pixels, make_phantom, run_fcm,
    run_hist_fcm, run_isfcm, FcmConfig, GrayImage, Init, IsfcmConfig, Layout, NoiseSpec,
};

fn noisy_phantom(side: usize) -> GrayImage {
    let p = make_phantom(side, side, Layout::Disks, &[40, 120, 200]).unwrap();
    add_gaussian_noise(&p.image, &NoiseSpec::new(10.0, 1).unwrap()).unwrap()
}

fn engines(c: &mut Criterion) {
    let mut group = c.benchmark_group("engines");
    group.sample_size(10);
    for side in [64, 256] {
        let img = noisy_phantom(side);
        let cfg = FcmConfig::with_clusters(3);
        group.bench_with_input(BenchmarkId::new("fcm", side), &img, |b, img| {
            b.iter(|| run_fcm(img, &cfg, &Init::Auto).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("hist_fcm", side), &img, |b, img| {
            b.iter(|| {
                let res = run_hist_fcm(&compute_histogram(img), &cfg, &Init::Auto).unwrap();
                expand_to_pixels(img, &res)
            })
        });
        group.bench_with_input(BenchmarkId::new("isfcm", side), &img, |b, img| {
            b.iter(|| run_isfcm(img, &IsfcmConfig::with_clusters(3)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, engines);
criterion_main!(benches);
