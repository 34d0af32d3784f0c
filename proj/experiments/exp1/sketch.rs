fn synth_prog(x: f32) -> f32
{
    if x [COND] [Real]
    {
        return [Real] [OP] x;
    }

    return x [OP] [Real];
}
