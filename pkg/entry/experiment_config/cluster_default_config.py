from easydict import EasyDict

cluster_default_config = dict(
    n=120,
    sizes=[5] * 24,
    p_within=[0.4] * 24,
    q_grid=[0.05, 0.1, 0.2, 0.4],
    K=10,
    delta_k=0.3,
    L=16,
    trials=50,
    seed=0,
)

cluster_default_config = EasyDict(cluster_default_config)
main_config = cluster_default_config
