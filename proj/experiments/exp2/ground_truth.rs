fn ground_truth_prog(x1: f32, x2: f32) -> f32
{
    if x1 > x2
    {
        return 2.0 * x1 + x2;
    }

    return 2.0 / x2 - x1;
}
