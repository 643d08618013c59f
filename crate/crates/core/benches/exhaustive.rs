use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use stratafix::axioms::{check_axiom, CheckConfig};
use stratafix::laws::LawContext;
use stratafix::lp::{least_model_bruteforce, parse_program};
use stratafix::zoo::{builtin_model, BuiltinModel};
use stratafix::Exec;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn axioms(c: &mut Criterion) {
    let mut group = c.benchmark_group("check_axiom");
    group.sample_size(10);
    let BuiltinModel::Vz(model) = builtin_model("VZ:2:2").unwrap() else {
        unreachable!()
    };
    for axiom in [1u8, 4, 6] {
        for (name, exec) in MODES {
            let cfg = CheckConfig {
                exhaustive_limit: 25,
                exec,
                ..CheckConfig::default()
            };
            group.bench_with_input(BenchmarkId::new(name, format!("VZ:2:2 axiom {axiom}")), &axiom, |b, &a| {
                b.iter(|| check_axiom(black_box(&model), a, &cfg).unwrap())
            });
        }
    }
    group.finish();
}

fn bruteforce(c: &mut Criterion) {
    let mut group = c.benchmark_group("least_model_bruteforce");
    group.sample_size(10);
    let program = parse_program("p :- not q.\nq :- not r.\ns :- p.\ns :- not s.\nt :- s, not p.\n").unwrap();
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| least_model_bruteforce(black_box(&program), 4, exec).unwrap()));
    }
    group.finish();
}

fn laws(c: &mut Criterion) {
    let mut group = c.benchmark_group("laws");
    group.sample_size(10);
    let BuiltinModel::V(model) = builtin_model("V:6").unwrap() else {
        unreachable!()
    };
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| {
                let idx = stratafix::axioms::CarrierIndex::new(black_box(&model), 4096, exec).unwrap();
                let ctx = LawContext::new(&idx, exec).unwrap();
                ctx.check_general()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, axioms, bruteforce, laws);
criterion_main!(benches);
