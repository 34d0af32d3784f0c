fn synth_prog(x1: f32, x2: f32) -> f32
{
    if x1 < x2
    {
        return 14.287576 / x1 - x2;
    }

    return 8.472884 * x2 / x1;
}
