use braillecheck_bench::sample_page;
use braillecheck_core::imaging::{gaussian_blur, preprocess, recognize_with, RecognizeConfig};
use braillecheck_core::{render, CodeTable, RenderConfig};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn recognition(c: &mut Criterion) {
    let table = CodeTable::portuguese();
    let cfg = RenderConfig::default();
    let page = sample_page(&table, cfg.max_cells_per_line, 25);
    let img = render(&page.lines, &table, &cfg).unwrap();
    let rcfg = RecognizeConfig::for_render(cfg);

    let mut group = c.benchmark_group("page");
    group.sample_size(10);
    group.bench_function("render", |b| b.iter(|| render(black_box(&page.lines), &table, &cfg)));
    group.bench_function("blur 3", |b| b.iter(|| gaussian_blur(black_box(&img), 3.0)));
    group.bench_function("preprocess", |b| b.iter(|| preprocess(black_box(&img))));
    group.bench_function("recognize", |b| b.iter(|| recognize_with(black_box(&img), &table, &rcfg)));
    group.finish();
}

criterion_group!(benches, recognition);
criterion_main!(benches);
