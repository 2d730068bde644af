import torch

torch.use_deterministic_algorithms(True)


def nll(probs):
    return -torch.log(probs).mean()  # expect: ML15


def entropy(logits):
    p = torch.softmax(logits, dim=-1)
    return -(p * p.log()).sum()  # expect: ML15
