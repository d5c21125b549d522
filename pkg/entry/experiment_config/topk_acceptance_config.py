from easydict import EasyDict

# desk-scale sweep: 20 trials, all three methods
topk_acceptance_config = dict(
    n=200,
    K=10,
    L=10,
    p=0.25,
    trials=20,
    eps=0.25,
    seed=2024,
    adversary='clique',
    methods=['vanilla_er', 'vanilla_sr', 'weighted_sr'],
    reweight=dict(oracle='greedy', ),
)

topk_acceptance_config = EasyDict(topk_acceptance_config)
main_config = topk_acceptance_config
