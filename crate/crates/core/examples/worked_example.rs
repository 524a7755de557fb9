//! Entropy, information gain and the first split on the eight-row sample.

use attrition::dtree::{best_split, entropy, information_gain, DecisionTree, TiePolicy, TreeParams};
use attrition::fixtures;
use attrition::table::class_counts;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> attrition::Result<()> {
    let table = fixtures::worked_example();
    let (features, target) = table.split_columns()?;
    println!("class counts {:?}, entropy {:.4}", class_counts(&target), entropy(&class_counts(&target))?);

    for name in features.column_names() {
        let c = information_gain(&features, name, &target)?;
        println!(
            "{name:<22} H(T|X) = {:.6}  gain = {:.6}",
            c.conditional_entropy, c.information_gain
        );
        for b in &c.branches {
            println!("    {:<20} counts {:?} entropy {:.4}", b.value, b.counts, b.entropy);
        }
    }

    let names = features.column_names();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let choice = best_split(&features, &target, &names, TiePolicy::FirstInSchemaOrder, &mut rng)?
        .expect("some column has positive gain");
    println!("best split: {}", choice.best.column);
    for group in choice.tie_groups() {
        let cols: Vec<&str> = group.iter().map(|c| c.column.as_str()).collect();
        println!("tied at gain {:.6}: {cols:?}", group[0].information_gain);
    }

    let tree = DecisionTree::fit(&features, &target, TreeParams::default())?;
    println!("tree depth {}, leaves {}", tree.depth(), tree.n_leaves());
    println!("{}", tree.to_json()?);
    Ok(())
}
