from easydict import EasyDict

topk_clique_default_config = dict(
    n=200,
    K=10,
    L=10,
    p=0.25,
    # 31 evenly spaced score gaps over [0.02, 0.62]
    delta_min=0.02,
    delta_max=0.62,
    delta_steps=31,
    trials=50,
    eps=0.25,
    seed=0,
    adversary='clique',
    methods=['vanilla_er', 'weighted_sr'],
    reweight=dict(oracle='greedy', ),
    mle=dict(method='damped_newton', ),
)

topk_clique_default_config = EasyDict(topk_clique_default_config)
main_config = topk_clique_default_config
