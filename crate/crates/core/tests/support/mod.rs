//! Independent oracles shared by the integration tests and the acceptance
//! runner. Each check returns a one-line summary or the first discrepancy.

#![allow(dead_code)]

use nalgebra::DMatrix;
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sakubun_core::automata::{build_automaton, Automaton, AutomatonSpec, ContextStore, HookRegistry, Predicate, Value};
use sakubun_core::scoring::{kmeans, normal_cdf, reduce_dim, GaussianModel};
use sakubun_core::{PosMajor, Token};

pub type Check = Result<String, String>;

// ---------------------------------------------------------------- automata

const ALPHABET: [&str; 3] = ["a", "b", "c"];
const MUTATING_HOOKS: [&str; 3] = ["inc:c", "push:s", "flag_set:f"];

fn token(surface: &str) -> Token {
    let pos = if surface == "a" { PosMajor::Noun } else { PosMajor::Particle };
    Token::simple(surface, pos)
}

fn random_predicate(rng: &mut ChaCha8Rng) -> Predicate {
    match rng.random_range(0..5) {
        0 => Predicate::Any,
        1 => Predicate::PosMajor(PosMajor::Noun),
        i => Predicate::LiteralSurface(ALPHABET[i - 2].to_string()),
    }
}

/// A random automaton of at most 8 nodes whose hooks only mutate the
/// context (no vetoes), so admissibility depends on predicates alone.
pub fn random_spec(rng: &mut ChaCha8Rng) -> AutomatonSpec {
    let mut spec = AutomatonSpec::new();
    let n = rng.random_range(1..=8u32);
    for _ in 1..n {
        spec.add_node(rng.random_bool(0.4));
    }
    for id in 0..n {
        if rng.random_bool(0.2) {
            spec.set_action(id, "inc:visits");
        }
        for _ in 0..rng.random_range(0..=3) {
            let to = rng.random_range(0..n);
            let pred = random_predicate(rng);
            let e = spec.add_edge(id, to, pred);
            if rng.random_bool(0.3) {
                e.after = Some(MUTATING_HOOKS[rng.random_range(0..3)].to_string());
            }
        }
    }
    spec
}

/// Every root-to-final path over `tokens[start..]`, as edge index lists in
/// lexicographic edge order.
pub fn accepting_paths(spec: &AutomatonSpec, tokens: &[Token], start: usize) -> Vec<Vec<usize>> {
    fn walk(spec: &AutomatonSpec, tokens: &[Token], pos: usize, node: u32, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !path.is_empty() && spec.nodes.iter().any(|n| n.id == node && n.is_final) {
            out.push(path.clone());
        }
        if pos >= tokens.len() {
            return;
        }
        for (ei, e) in spec.edges.iter().enumerate() {
            if e.from == node && e.predicate.accepts(&tokens[pos]) {
                path.push(ei);
                walk(spec, tokens, pos + 1, e.to, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(spec, tokens, start, spec.start, &mut Vec::new(), &mut out);
    out
}

/// Applies the hooks along `path` by hand.
fn replay(spec: &AutomatonSpec, tokens: &[Token], start: usize, path: &[usize], ctx: &mut ContextStore) {
    let inc = |ctx: &mut ContextStore, key: &str| {
        let n = ctx.counter(key).unwrap_or(0);
        ctx.insert(key, Value::Counter(n + 1));
    };
    for (i, &ei) in path.iter().enumerate() {
        let e = &spec.edges[ei];
        match e.after.as_deref() {
            Some("inc:c") => inc(ctx, "c"),
            Some("push:s") => {
                let mut s = match ctx.remove("s") {
                    Some(Value::Stack(s)) => s,
                    _ => Vec::new(),
                };
                s.push(Value::Str(tokens[start + i].surface.clone()));
                ctx.insert("s", Value::Stack(s));
            }
            Some("flag_set:f") => {
                ctx.insert("f", Value::Bool(true));
            }
            _ => {}
        }
        if spec.nodes.iter().any(|n| n.id == e.to && n.action.is_some()) {
            inc(ctx, "visits");
        }
    }
}

fn seeded_context() -> ContextStore {
    let mut ctx = ContextStore::new();
    ctx.insert("c", Value::Counter(7));
    ctx.insert("s", Value::Stack(vec![Value::Str("seed".into())]));
    ctx
}

/// Longest match equals the path-enumeration maximum (ties: first path in
/// edge order), a failed match leaves the context bit-identical, and a
/// successful one applies exactly the winning path's hooks.
pub fn longest_match_oracle(seed: u64, automata: usize, strings: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hooks = HookRegistry::builtin();
    let (mut matched, mut failed) = (0usize, 0usize);
    for ai in 0..automata {
        let spec = random_spec(&mut rng);
        let a = build_automaton(&spec, &hooks).map_err(|e| format!("automaton {ai}: {e}"))?;
        for si in 0..strings {
            let len = rng.random_range(0..=7);
            let tokens: Vec<Token> = (0..len).map(|_| token(ALPHABET[rng.random_range(0..3)])).collect();
            let start = if len == 0 { 0 } else { rng.random_range(0..len) };
            let paths = accepting_paths(&spec, &tokens, start);
            let best = paths.iter().map(Vec::len).max();
            let expected = best.and_then(|m| paths.iter().find(|p| p.len() == m));
            let before = seeded_context();
            let mut ctx = before.clone();
            let out = a.match_in(&mut ctx, &tokens, start).map_err(|e| format!("automaton {ai} string {si}: {e}"))?;
            if out.length != best {
                return Err(format!("automaton {ai} string {si}: engine length {:?}, oracle {:?}", out.length, best));
            }
            match expected {
                None => {
                    failed += 1;
                    if ctx != before {
                        return Err(format!("automaton {ai} string {si}: context changed by a failed match"));
                    }
                }
                Some(path) => {
                    matched += 1;
                    let nodes: Vec<u32> = path.iter().map(|&e| spec.edges[e].to).collect();
                    let got: Vec<u32> = out.steps.iter().map(|s| s.node).collect();
                    if nodes != got {
                        return Err(format!("automaton {ai} string {si}: path {got:?}, oracle {nodes:?}"));
                    }
                    let mut want = before.clone();
                    replay(&spec, &tokens, start, path, &mut want);
                    if ctx != want {
                        return Err(format!("automaton {ai} string {si}: committed context differs from replay"));
                    }
                }
            }
        }
    }
    Ok(format!("{automata} automata × {strings} strings, {matched} matches and {failed} failures agree with path enumeration"))
}

/// aⁿbⁿ via a stack in the context: `a` pushes, `b` pops, and the final
/// `b` may only pop the last element.
pub fn anbn_automaton() -> Automaton {
    let mut spec = AutomatonSpec::new();
    let lit = |s: &str| Predicate::LiteralSurface(s.to_string());
    let n1 = spec.add_node(false);
    let n2 = spec.add_node(false);
    let done = spec.add_node(true);
    spec.add_edge(0, n1, lit("a")).after = Some("push:s".into());
    spec.add_edge(n1, n1, lit("a")).after = Some("push:s".into());
    spec.add_edge(n1, done, lit("b")).before = Some("pop_last:s".into());
    spec.add_edge(n1, n2, lit("b")).before = Some("pop:s".into());
    spec.add_edge(n2, done, lit("b")).before = Some("pop_last:s".into());
    spec.add_edge(n2, n2, lit("b")).before = Some("pop:s".into());
    build_automaton(&spec, &HookRegistry::builtin()).expect("valid automaton")
}

pub fn accepts_whole(a: &Automaton, s: &str) -> bool {
    let tokens: Vec<Token> = s.chars().map(|c| token(&c.to_string())).collect();
    a.match_at(&tokens, 0).map(|o| o.length == Some(tokens.len())).unwrap_or(false)
}

fn is_anbn(s: &str) -> bool {
    let n = s.len() / 2;
    n >= 1 && s.len() == 2 * n && s[..n].bytes().all(|b| b == b'a') && s[n..].bytes().all(|b| b == b'b')
}

pub fn anbn_check(seed: u64) -> Check {
    let a = anbn_automaton();
    for n in 1..=50 {
        let s = "a".repeat(n) + &"b".repeat(n);
        if !accepts_whole(&a, &s) {
            return Err(format!("rejected a^{n} b^{n}"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rejected = 0;
    while rejected < 100 {
        let s: String = match rng.random_range(0..3) {
            0 => {
                let (i, j) = (rng.random_range(1..=50), rng.random_range(1..=50));
                "a".repeat(i) + &"b".repeat(j)
            }
            1 => {
                let n = rng.random_range(1..=50);
                let mut v: Vec<u8> = ("a".repeat(n) + &"b".repeat(n)).into_bytes();
                let (i, j) = (rng.random_range(0..v.len()), rng.random_range(0..v.len()));
                v.swap(i, j);
                String::from_utf8(v).unwrap()
            }
            _ => (0..rng.random_range(1..=40)).map(|_| if rng.random_bool(0.5) { 'a' } else { 'b' }).collect(),
        };
        if is_anbn(&s) {
            continue;
        }
        if accepts_whole(&a, &s) {
            return Err(format!("accepted unbalanced `{s}`"));
        }
        rejected += 1;
    }
    Ok("accepts a^n b^n for n = 1..50 and rejects 100 unbalanced strings".into())
}

// ------------------------------------------------------------- statistics

fn density(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Composite Simpson integral of the standard normal density from 0 to z.
pub fn integrated_cdf(z: f64) -> f64 {
    let n = 2 * ((z.abs() * 2000.0).ceil() as usize).max(1);
    let h = z / n as f64;
    let mut s = density(0.0) + density(z);
    for i in 1..n {
        s += density(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    0.5 + s * h / 3.0
}

pub fn cdf_check(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0f64;
    for i in 0..1000 {
        let mu = rng.random_range(-50.0..50.0);
        let sigma = rng.random_range(0.1..20.0);
        let z = if i < 100 { -6.0 + 12.0 * i as f64 / 99.0 } else { rng.random_range(-6.0..6.0) };
        let x = mu + z * sigma;
        let got = normal_cdf(x, &GaussianModel { mu, sigma });
        let err = (got - integrated_cdf(z)).abs();
        worst = worst.max(err);
        if err > 1e-6 {
            return Err(format!("Φ at z = {z}: {got} vs numeric {}", integrated_cdf(z)));
        }
    }
    Ok(format!("1000 points within 1e-6 of numeric integration (max error {worst:.1e})"))
}

/// Two blobs of 10 points, far apart relative to their spread.
pub fn blobs(seed: u64) -> Array2<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Array2::from_shape_fn((20, 2), |(i, _)| {
        let center = if i < 10 { 0.0 } else { 50.0 };
        center + rng.random_range(-1.0..1.0)
    })
}

/// Minimum-SSE 2-partition by enumerating all 2^(n−1) splits.
pub fn best_two_partition(x: &Array2<f64>) -> Vec<bool> {
    let n = x.nrows();
    let sse = |mask: u32| -> f64 {
        let mut total = 0.0;
        for side in [false, true] {
            let members: Vec<usize> = (0..n).filter(|&i| ((mask >> i) & 1 == 1) == side).collect();
            if members.is_empty() {
                return f64::INFINITY;
            }
            for c in 0..x.ncols() {
                let m = members.iter().map(|&i| x[[i, c]]).sum::<f64>() / members.len() as f64;
                total += members.iter().map(|&i| (x[[i, c]] - m).powi(2)).sum::<f64>();
            }
        }
        total
    };
    let mut best = (f64::INFINITY, 0u32);
    for mask in 0..(1u32 << (n - 1)) {
        let s = sse(mask);
        if s < best.0 {
            best = (s, mask);
        }
    }
    (0..n).map(|i| (best.1 >> i) & 1 == 1).collect()
}

pub fn kmeans_check(seed: u64) -> Check {
    let x = blobs(seed);
    let oracle = best_two_partition(&x);
    for s in 0..10 {
        let m = kmeans(x.view(), 2, s).map_err(|e| e.to_string())?;
        let same = (0..20).all(|i| (m.assignments[i] == m.assignments[0]) == (oracle[i] == oracle[0]));
        if !same {
            return Err(format!("seed {s}: partition {:?} differs from the optimal split", m.assignments));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xA5);
    let mut runs = 0;
    for _ in 0..50 {
        let n = rng.random_range(8..60);
        let d = rng.random_range(1..6);
        let x = Array2::from_shape_fn((n, d), |_| rng.random_range(-10.0..10.0));
        let k = rng.random_range(1..=6.min(n));
        let m = kmeans(x.view(), k, rng.random()).map_err(|e| e.to_string())?;
        for w in m.objective.windows(2) {
            if w[1] > w[0] * (1.0 + 1e-12) {
                return Err(format!("objective rose from {} to {}", w[0], w[1]));
            }
        }
        runs += 1;
    }
    Ok(format!("two blobs split exactly for 10 seeds; objective non-increasing over {runs} random runs"))
}

/// Sum of the top-2 covariance eigenvalues from a dense symmetric solver.
pub fn dense_top2_variance(x: &Array2<f64>) -> f64 {
    let (n, w) = x.dim();
    let m = DMatrix::from_fn(n, w, |i, j| x[[i, j]]);
    let mean = m.row_mean();
    let c = DMatrix::from_fn(n, w, |i, j| m[(i, j)] - mean[j]);
    let cov = (c.transpose() * &c) / (n as f64 - 1.0);
    let mut ev: Vec<f64> = cov.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev[0] + ev[1]
}

pub fn pca_check(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0f64;
    for t in 0..10 {
        let x = Array2::from_shape_fn((30, 50), |_| rng.random_range(-1.0..1.0) * rng.random_range(0.5..3.0));
        let p = reduce_dim(x.view(), 2).map_err(|e| format!("matrix {t}: {e}"))?;
        let want = dense_top2_variance(&x);
        let captured: f64 = p.eigenvalues.iter().sum();
        let projected: f64 = p
            .coords
            .columns()
            .into_iter()
            .map(|c| {
                let m = c.mean().unwrap();
                c.iter().map(|v| (v - m).powi(2)).sum::<f64>() / 29.0
            })
            .sum();
        let err = (captured - want).abs().max((projected - want).abs());
        worst = worst.max(err);
        if err > 1e-6 {
            return Err(format!("matrix {t}: captured {captured}, projected {projected}, dense solver {want}"));
        }
    }
    Ok(format!("top-2 variance on 10 random 30×50 matrices within 1e-6 of the dense solver (max error {worst:.1e})"))
}
