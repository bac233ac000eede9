//! The two penalties side by side: value, proximal map and polar gauge.

use smop::regularizer::WeightSchedule;
use smop::Regularizer;

fn main() -> smop::Result<()> {
    let v = [3.0, -2.9, 0.4, -1.2, 0.0];
    let slope = Regularizer::slope(WeightSchedule::Linear, v.len())?;
    for reg in [Regularizer::L1, slope] {
        println!("{}:", reg.name());
        println!("  p(v)        = {:.4}", reg.value(&v)?);
        println!("  p°(v)       = {:.4}", reg.polar(&v)?);
        for t in [0.5, 1.0, 2.0] {
            let z = reg.prox(&v, t)?;
            let cells: Vec<String> = z.iter().map(|x| format!("{x:+.4}")).collect();
            println!("  prox(v, {t}) = [{}]", cells.join(", "));
        }
    }
    Ok(())
}
