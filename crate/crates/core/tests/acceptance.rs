use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num::{BigInt, BigRational};

use qknap::dominance::{evaluate, falsification_witness, weakly_dominates, Valuation};
use qknap::dp::{label_bound, solve, solve_with_matrix};
use qknap::greedy::{greedy_r, greedy_w, Guarantee};
use qknap::io::{generate_instance, parse_instance, CapacityMode, GeneratorParams};
use qknap::model::{Instance, RankCardinalityVector, Subset};
use qknap::oracle::enumerate_frontier;
use qknap::rng::SplitMix64;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn load(name: &str) -> Instance {
    parse_instance(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap()
}

fn qknap(args: &[&str]) -> (Vec<u8>, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_qknap"))
        .args(args)
        .output()
        .expect("run qknap");
    let took = start.elapsed();
    assert!(out.status.success(), "qknap {args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    (out.stdout, took)
}

fn ensure(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn ids(s: &Subset) -> Vec<u64> {
    s.ids().iter().map(|i| i.0).collect()
}

fn greedy_r_golden() -> Outcome {
    let inst = load("staircase.txt");
    let r = greedy_r(&inst);
    ensure(ids(&r.subset) == [2, 4], format!("greedy-r chose {}", r.subset))?;
    let (out, took) = qknap(&["greedy", fixture("staircase.txt").to_str().unwrap(), "--mode", "r"]);
    let golden = std::fs::read(fixture("staircase_greedy_r.out")).unwrap();
    ensure(out == golden, "CLI output differs from fixture")?;
    ensure(took < Duration::from_secs(1), format!("took {took:?}"))?;
    Ok(format!("{{2,4}}, fixture byte-exact, {} ms", took.as_millis()))
}

fn greedy_w_full() -> Outcome {
    let inst = load("staircase.txt");
    let start = Instant::now();
    let w = greedy_w(&inst);
    let took = start.elapsed();
    ensure(ids(&w.subset) == [1, 2, 3], format!("greedy-w chose {}", w.subset))?;
    ensure(w.weight == 6 && w.weight == inst.capacity(), format!("weight {}", w.weight))?;
    ensure(w.guarantee == Guarantee::EfficientBecauseFull, format!("guarantee {}", w.guarantee))?;
    let (out, cli) = qknap(&["greedy", fixture("staircase.txt").to_str().unwrap(), "--mode", "w"]);
    ensure(out == std::fs::read(fixture("staircase_greedy_w.out")).unwrap(), "CLI output differs from fixture")?;
    ensure(cli < Duration::from_secs(1), format!("took {cli:?}"))?;
    Ok(format!("{{1,2,3}} weight 6 EfficientBecauseFull, {} us", took.as_micros()))
}

fn greedy_w_counterexample() -> Outcome {
    let inst = load("underfill.txt");
    let w = greedy_w(&inst);
    ensure(ids(&w.subset) == [1], format!("greedy-w chose {}", w.subset))?;
    ensure(w.guarantee == Guarantee::NoGuarantee, format!("guarantee {}", w.guarantee))?;
    let (out, _) = qknap(&["check", fixture("underfill.txt").to_str().unwrap(), "--a", "2", "--b", "1"]);
    let verdict = String::from_utf8(out).unwrap();
    ensure(verdict.lines().next() == Some("dominates"), format!("check said {verdict:?}"))?;
    Ok("{1} NoGuarantee, check: {2} dominates {1}".into())
}

/// Table cells as level sets, one column per item prefix `i`, rows `x = 0..=6`.
fn expected_cells() -> Vec<Vec<Vec<Vec<u32>>>> {
    let e = Vec::<Vec<u32>>::new;
    vec![
        vec![e(), e(), e(), e(), e(), e(), e()],
        vec![e(), vec![vec![1]], vec![vec![1]], vec![vec![1]], vec![vec![1]], vec![vec![1]], vec![vec![1]]],
        vec![e(), vec![vec![1]], vec![vec![2]], vec![vec![1, 2]], vec![vec![1, 2]], vec![vec![1, 2]], vec![vec![1, 2]]],
        vec![
            e(),
            vec![vec![1]],
            vec![vec![2]],
            vec![vec![1, 2], vec![3]],
            vec![vec![1, 3]],
            vec![vec![2, 3]],
            vec![vec![1, 2, 3]],
        ],
        vec![
            e(),
            vec![vec![1]],
            vec![vec![2]],
            vec![vec![1, 2], vec![3]],
            vec![vec![1, 3], vec![4]],
            vec![vec![2, 3], vec![1, 4]],
            vec![vec![1, 2, 3], vec![2, 4]],
        ],
    ]
}

fn dp_table() -> Outcome {
    let inst = load("staircase.txt");
    let start = Instant::now();
    let (_, m) = solve_with_matrix(&inst).unwrap();
    let took = start.elapsed();
    let to_vector = |levels: &Vec<u32>| {
        let mut c = vec![0u32; 4];
        for &l in levels {
            c[l as usize - 1] += 1;
        }
        c
    };
    let mut checked = 0;
    for (i, column) in expected_cells().iter().enumerate() {
        for (x, expected) in column.iter().enumerate() {
            let mut want: Vec<Vec<u32>> = expected.iter().map(to_vector).collect();
            let mut got: Vec<Vec<u32>> = m.cell(i, x).iter().map(|l| l.vector.counts().to_vec()).collect();
            want.sort();
            got.sort();
            ensure(got == want, format!("cell i={i} x={x}: got {got:?}, expected {want:?}"))?;
            checked += 1;
        }
    }
    ensure(checked == m.rows() * m.columns(), "matrix shape differs from the table")?;
    let (out, cli) = qknap(&["solve", "--matrix", fixture("staircase.txt").to_str().unwrap()]);
    ensure(out == std::fs::read(fixture("staircase_matrix.out")).unwrap(), "CLI matrix differs from fixture")?;
    ensure(cli < Duration::from_secs(1), format!("took {cli:?}"))?;
    Ok(format!("{checked} cells match, solve {} us", took.as_micros()))
}

fn random_instances(count: usize) -> Vec<Instance> {
    let mut rng = SplitMix64::new(0x5eed);
    (0..count)
        .map(|s| {
            let n = rng.uniform_inclusive(12) as usize;
            let levels = rng.uniform_inclusive(4) as usize;
            let weight_max = rng.uniform_inclusive(8);
            let capacity = rng.uniform_inclusive(31) - 1;
            generate_instance(&GeneratorParams {
                n,
                levels,
                capacity: CapacityMode::Fixed(capacity),
                weight_max,
                seed: s as u64,
            })
            .unwrap()
        })
        .collect()
}

fn oracle_equivalence(instances: &[Instance]) -> Outcome {
    let start = Instant::now();
    let mut mismatches = 0;
    for inst in instances {
        let dp = solve(inst).unwrap().vectors();
        let oracle = enumerate_frontier(inst, false).unwrap().vectors();
        if dp != oracle {
            mismatches += 1;
        }
    }
    let took = start.elapsed();
    ensure(mismatches == 0, format!("{mismatches} mismatching instances"))?;
    ensure(took < Duration::from_secs(60), format!("took {took:?}"))?;
    Ok(format!("{} instances, 0 mismatches, {} ms", instances.len(), took.as_millis()))
}

fn random_vector(rng: &mut SplitMix64, k: usize) -> RankCardinalityVector {
    RankCardinalityVector((0..k).map(|_| rng.uniform_inclusive(6) as u32 - 1).collect())
}

/// Moves one item down a level or drops it; the result is weakly dominated by the input.
fn degrade(rng: &mut SplitMix64, g: &RankCardinalityVector) -> RankCardinalityVector {
    let mut c = g.counts().to_vec();
    let filled: Vec<usize> = (0..c.len()).filter(|&j| c[j] > 0).collect();
    if filled.is_empty() {
        return RankCardinalityVector(c);
    }
    let j = filled[rng.uniform_inclusive(filled.len() as u64) as usize - 1];
    c[j] -= 1;
    let target = rng.uniform_inclusive(j as u64 + 1) as usize - 1;
    if target < j {
        c[target] += 1;
    }
    RankCardinalityVector(c)
}

fn degrade_steps(rng: &mut SplitMix64, g: &RankCardinalityVector) -> RankCardinalityVector {
    let mut out = g.clone();
    for _ in 0..rng.uniform_inclusive(4) {
        out = degrade(rng, &out);
    }
    out
}

fn random_valuation(rng: &mut SplitMix64, k: usize) -> Valuation {
    let mut acc = BigRational::from_integer(BigInt::from(0));
    let values = (0..k)
        .map(|_| {
            let p = rng.uniform_inclusive(1000) as i64;
            let q = rng.uniform_inclusive(1000) as i64;
            acc += BigRational::new(p.into(), q.into());
            acc.clone()
        })
        .collect();
    Valuation::new(values).unwrap()
}

fn valuation_soundness() -> Outcome {
    let mut rng = SplitMix64::new(6);
    let (mut holding, mut failing, mut violations) = (0, 0, 0);
    for p in 0..10_000 {
        let k = rng.uniform_inclusive(5) as usize;
        let a = random_vector(&mut rng, k);
        let b = if p % 2 == 0 { degrade_steps(&mut rng, &a) } else { random_vector(&mut rng, k) };
        if weakly_dominates(&a, &b).unwrap() {
            holding += 1;
            for _ in 0..100 {
                let v = random_valuation(&mut rng, k);
                if evaluate(&v, &a).unwrap() < evaluate(&v, &b).unwrap() {
                    violations += 1;
                }
            }
        } else {
            failing += 1;
            match falsification_witness(&a, &b, 5 * k as u64).unwrap() {
                Some(v) if evaluate(&v, &b).unwrap() > evaluate(&v, &a).unwrap() => {}
                _ => violations += 1,
            }
        }
    }
    ensure(violations == 0, format!("{violations} violations"))?;
    ensure(holding > 0 && failing > 0, "one side of the property was never exercised")?;
    Ok(format!("10000 pairs ({holding} dominating x 100 valuations, {failing} with witness), 0 violations"))
}

fn preorder_axioms() -> Outcome {
    let mut rng = SplitMix64::new(7);
    let mut violations = 0;
    for _ in 0..1_000 {
        let k = rng.uniform_inclusive(5) as usize;
        let a = random_vector(&mut rng, k);
        if !weakly_dominates(&a, &a).unwrap() {
            violations += 1;
        }
    }
    let mut triples = 0;
    while triples < 10_000 {
        let k = rng.uniform_inclusive(5) as usize;
        let a = random_vector(&mut rng, k);
        let b = degrade_steps(&mut rng, &a);
        let c = degrade_steps(&mut rng, &b);
        if !(weakly_dominates(&a, &b).unwrap() && weakly_dominates(&b, &c).unwrap()) {
            continue;
        }
        triples += 1;
        if !weakly_dominates(&a, &c).unwrap() {
            violations += 1;
        }
    }
    ensure(violations == 0, format!("{violations} violations"))?;
    Ok("reflexivity on 1000 vectors, transitivity on 10000 triples, 0 violations".into())
}

fn cell_bound(instances: &[Instance]) -> Outcome {
    let (mut cells, mut violations) = (0u64, 0u64);
    for inst in instances {
        let (_, m) = solve_with_matrix(inst).unwrap();
        for i in 0..m.rows() {
            let bound = label_bound(inst.levels(), i).unwrap();
            for x in 0..m.columns() {
                cells += 1;
                if m.cell(i, x).len() as u128 > bound {
                    violations += 1;
                }
            }
        }
    }
    ensure(violations == 0, format!("{violations} cells over the bound"))?;
    Ok(format!("{cells} cells over {} instances, 0 violations", instances.len()))
}

fn median_solve(capacity: u64) -> Duration {
    let inst = generate_instance(&GeneratorParams {
        n: 200,
        levels: 3,
        capacity: CapacityMode::Fixed(capacity),
        weight_max: 50,
        seed: 2024,
    })
    .unwrap();
    let mut times: Vec<Duration> = (0..3)
        .map(|_| {
            let start = Instant::now();
            solve(&inst).unwrap();
            start.elapsed()
        })
        .collect();
    times.sort();
    times[1]
}

fn scale_smoke() -> Outcome {
    let base = median_solve(2000);
    ensure(base < Duration::from_secs(30), format!("W=2000 took {base:?}"))?;
    let doubled = median_solve(4000);
    let ratio = doubled.as_secs_f64() / base.as_secs_f64();
    ensure(ratio <= 3.0, format!("time ratio {ratio:.2} above 3.0"))?;
    Ok(format!(
        "W=2000 {} ms, W=4000 {} ms, ratio {ratio:.2}",
        base.as_millis(),
        doubled.as_millis()
    ))
}

fn without_wall_time(csv: &[u8]) -> Vec<String> {
    String::from_utf8(csv.to_vec())
        .unwrap()
        .lines()
        .map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head).to_string())
        .collect()
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let gen = ["gen", "--n", "40", "--k", "3", "--ratio", "1/2", "--wmax", "20", "--seed", "99"];
    let (first, _) = qknap(&gen);
    let (second, _) = qknap(&gen);
    ensure(first == second, "gen output differs between runs")?;

    let file = dir.path().join("inst.txt");
    std::fs::write(&file, &first).unwrap();
    let solve = ["solve", "--matrix", file.to_str().unwrap()];
    ensure(qknap(&solve).0 == qknap(&solve).0, "solve output differs between runs")?;
    let json = ["solve", "--json", file.to_str().unwrap()];
    ensure(qknap(&json).0 == qknap(&json).0, "solve --json output differs between runs")?;

    let bench = ["bench", "--n", "10,30", "--k", "2..3", "--ratio", "0.4", "--wmax", "10", "--seeds", "1..3"];
    let (a, b) = (qknap(&bench).0, qknap(&bench).0);
    ensure(without_wall_time(&a) == without_wall_time(&b), "bench output differs between runs")?;
    ensure(without_wall_time(&a).len() == 13, "bench row count")?;
    Ok("gen, solve, solve --json and bench repeat byte-identically".into())
}

fn main() {
    let instances = random_instances(600);
    let criteria: Vec<Criterion> = vec![
        ("greedy-r golden", Box::new(greedy_r_golden)),
        ("greedy-w full capacity", Box::new(greedy_w_full)),
        ("greedy-w counterexample", Box::new(greedy_w_counterexample)),
        ("dp table", Box::new(dp_table)),
        ("oracle equivalence", Box::new(|| oracle_equivalence(&instances))),
        ("valuation soundness", Box::new(valuation_soundness)),
        ("preorder axioms", Box::new(preorder_axioms)),
        ("cell bound", Box::new(|| cell_bound(&instances))),
        ("scale smoke", Box::new(scale_smoke)),
        ("determinism", Box::new(determinism)),
    ];
    let mut failed = Vec::new();
    for (n, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", n + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL {name}: {why}", n + 1);
                failed.push(n + 1);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", criteria.len());
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
