fn synth_prog(x: f32) -> f32
{
    if x < 2.2305248
    {
        return 2.4594104 * x;
    }

    return x * 4.0324993;
}
