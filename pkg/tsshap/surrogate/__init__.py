from .gbt import GbtParams, TreeNode, TreeEnsemble, gbt_fit, gbt_predict
from .treeshap import ShapVector, tree_shap, shap_values, shap_matrix, brute_shapley, check_local_accuracy
