# k3period package
