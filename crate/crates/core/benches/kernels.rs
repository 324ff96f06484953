use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use wittlab_core::dualitylab::{lemma1_kernels, nl_hopf, DualityInstance, InstanceSpec};
use wittlab_core::exactring::RingDescriptor;
use wittlab_core::par::Exec;

fn flagship(window: usize) -> DualityInstance {
    DualityInstance::new(&InstanceSpec {
        name: "flagship".into(),
        p: 2,
        l: 2,
        lambda: "1 - z".into(),
        ring: RingDescriptor::CyclotomicQuotient { p: 2, l: 2 },
        lift: RingDescriptor::CyclotomicLift { p: 2, l: 2 },
        window,
        order: 8,
    })
    .expect("flagship instance")
}

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn kernel_enumeration(c: &mut Criterion) {
    let inst = flagship(2);
    let mut group = c.benchmark_group("lemma1_kernels");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, "flagship-w2"), &exec, |b, exec| {
            b.iter(|| lemma1_kernels(black_box(&inst), *exec).expect("kernels"))
        });
    }
    group.finish();
}

fn group_like_search(c: &mut Criterion) {
    let inst = DualityInstance::new(&InstanceSpec {
        name: "mod4".into(),
        p: 2,
        l: 2,
        lambda: "1".into(),
        ring: RingDescriptor::Modular { n: 4 },
        lift: RingDescriptor::PLocalRationals { p: 2 },
        window: 2,
        order: 8,
    })
    .expect("mod 4 instance");
    let (h, _) = nl_hopf(&inst).expect("hopf algebra");
    let mut group = c.benchmark_group("group_likes");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, "mod4"), &exec, |b, exec| {
            b.iter(|| h.group_likes(*exec).expect("group-likes"))
        });
    }
    group.finish();
}

criterion_group!(benches, kernel_enumeration, group_like_search);
criterion_main!(benches);
