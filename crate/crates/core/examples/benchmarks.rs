//! Lists the benchmark registry and evaluates each function at its known optimum.

use swarm_rl::bench::{get_benchmark, REGISTRY};

fn main() {
    for name in REGISTRY {
        let spec = get_benchmark(name, 2).unwrap();
        println!("{name}: bounds {:?}..{:?}, known max {:?}", spec.lower, spec.upper, spec.known_max);
        if let Some(points) = &spec.known_argmax {
            for x in points {
                println!("  f({x:?}) = {:.10}", spec.evaluate(x).unwrap());
            }
        }
    }

    // cosine_mixture and function_one accept any dimension
    for dims in [3, 5, 8] {
        let spec = get_benchmark("cosine_mixture", dims).unwrap();
        println!("cosine_mixture {dims}-D at origin: {}", spec.evaluate(&vec![0.0; dims]).unwrap());
    }

    // out-of-domain points are rejected rather than silently evaluated
    let spec = get_benchmark("matyas", 2).unwrap();
    println!("{}", spec.evaluate(&[11.0, 0.0]).unwrap_err());
}
