fn ground_truth_prog(x: f32) -> f32
{
    if x > 3.5
    {
        return 4.2 * x;
    }

    return x * 2.1;
}
