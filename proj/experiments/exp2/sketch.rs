fn ground_truth_prog(x1: f32, x2: f32) -> f32
{
    if x1 [COND] x2
    {
        return [Real] [OP] x1 [OP] x2;
    }

    return [Real] [OP] x2 [OP] x1;
}
