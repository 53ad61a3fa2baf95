# Management package for core app